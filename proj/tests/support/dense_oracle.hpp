#pragma once

#include <varfrac/assembly.hpp>
#include <varfrac/functionals.hpp>

#include <vector>

// Brute-force reference implementations used only by the tests: same discrete
// forms as the library, computed through entirely different machinery (dense
// storage, tensor quadrature instead of closed-form moments, direct
// factorizations instead of iterative solvers).
namespace testsupport {

struct Dense {
    int n = 0;
    std::vector<double> a;

    static Dense zeros(int n) { return Dense{n, std::vector<double>(n * n, 0.0)}; }
    double& at(int i, int j) { return a[i * n + j]; }
    double at(int i, int j) const { return a[i * n + j]; }
};

/// Weighted stiffness over free nodes: per element the order is frozen at the
/// x-cell midpoint (matching the library's discrete form), the weight
/// G y^delta is integrated by tensor Gauss with `pts` points per axis, and
/// the first y-layer is split into `split` geometric subcells toward y=0.
Dense dense_stiffness(const varfrac::ExtensionSystem& sys, int pts = 10, int split = 40);

/// Weighted mass over free nodes, same quadrature.
Dense dense_weighted_mass(const varfrac::ExtensionSystem& sys, int pts = 10, int split = 40);

/// Cholesky factorization + solve; throws std::runtime_error if not SPD.
std::vector<double> cholesky_solve(Dense A, std::vector<double> b);

/// Smallest eigenvalue of the SPD pencil A v = nu B v: B = L L^T by Cholesky,
/// then cyclic Jacobi on L^{-1} A L^{-T}.
double dense_smallest_generalized_eig(const Dense& A, const Dense& B);

/// Direct two-sided quadrature of
///   \int_0^1 \int_{|t-tau| >= band} G (1+delta(1-p'))^p |t-tau|^{delta-p}
///                                   |v(t)-v(tau)|^p dtau dt
/// for a CONSTANT order field (closed-form weight, no phi/psi machinery):
/// composite Gauss outer rule, geometric shells of ratio 1.7 inner rule.
double direct_double_integral(const varfrac::WeightSpec& spec, double p,
                              const varfrac::GridFunction1D& v, double band);

} // namespace testsupport
