#pragma once

#include "varfrac/assembly.hpp"
#include "varfrac/sparse_linalg.hpp"

#include <vector>

namespace varfrac {

struct SolveStats {
    int iterations = 0;
    double residual = 0.0;
};

/// Result of the Poisson solve on the cylinder: u over free nodes, its base
/// trace v, and the discrete energy 0.5 u^T A u - b^T u.
struct PoissonSolution {
    std::vector<double> u;
    std::vector<double> v;
    double energy = 0.0;
    SolveStats stats;
};

/// Solves A u = b (b a free-index load vector) by preconditioned CG.
PoissonSolution solve_poisson(const ExtensionSystem& sys, const std::vector<double>& load,
                              const CgOptions& opts = {});

/// Dirichlet (harmonic) extension of base data v: base values imposed,
/// interior block solved, returned over all free indices.
std::vector<double> harmonic_extension(const ExtensionSystem& sys,
                                       const std::vector<double>& v_base,
                                       const CgOptions& opts = {});

/// Penalty relaxation of the base constraint: minimizes
///   0.5 u^T A u + (mu/2) (u|_B - v)^T M_base (u|_B - v)
/// over the free space, i.e. solves (A + mu E) u = mu E~ v with E the
/// embedding of M_base into base rows/columns.
std::vector<double> penalty_extension(const ExtensionSystem& sys,
                                      const std::vector<double>& v_base, double mu,
                                      const CgOptions& opts = {});

/// L2(Omega) distance between the base trace of u and v (the penalty's
/// constraint violation).
double base_violation(const ExtensionSystem& sys, const std::vector<double>& u_free,
                      const std::vector<double>& v_base);

/// Energy 0.5 u^T A u of a free vector (the Dirichlet part only).
double extension_energy(const ExtensionSystem& sys, const std::vector<double>& u_free);

/// Discrete Dirichlet-to-Neumann action: lambda is the operator applied to v.
struct DtNResult {
    std::vector<double> lambda;       ///< M_base^{-1} * raw_residual
    std::vector<double> raw_residual; ///< base rows of A * extension(v)
};

DtNResult apply_operator(const ExtensionSystem& sys, const std::vector<double>& v_base,
                         const CgOptions& opts = {});

/// 1/sqrt(nu_min) for the pencil A u = nu M_w u: the discrete constant in
/// ||u||_{L2(w)} <= C_P ||grad u||_{L2(w)} over the free space.
double poincare_constant(const ExtensionSystem& sys, const EigOptions& opts = {});

} // namespace varfrac
