#include "varfrac/extension_solver.hpp"

#include <cmath>
#include <stdexcept>

namespace varfrac {

namespace {

void check_base_size(const ExtensionSystem& sys, const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != sys.n_base())
        throw std::invalid_argument("extension_solver: base vector size mismatch");
    for (double x : v)
        if (!std::isfinite(x))
            throw std::invalid_argument("extension_solver: non-finite base data");
}

// interior = free minus base; returns the interior submatrix and the
// base-coupling action needed for the Schur-style Dirichlet solve
struct InteriorSplit {
    std::vector<int> interior_of_free; // free idx -> interior idx or -1
    std::vector<int> free_of_interior; // interior idx -> free idx
};

InteriorSplit split_interior(const ExtensionSystem& sys) {
    InteriorSplit sp;
    sp.interior_of_free.assign(sys.n_free(), -1);
    std::vector<char> is_base(sys.n_free(), 0);
    for (int b = 0; b < sys.n_base(); ++b) is_base[sys.base_to_free[b]] = 1;
    for (int f = 0; f < sys.n_free(); ++f) {
        if (!is_base[f]) {
            sp.interior_of_free[f] = static_cast<int>(sp.free_of_interior.size());
            sp.free_of_interior.push_back(f);
        }
    }
    return sp;
}

} // namespace

PoissonSolution solve_poisson(const ExtensionSystem& sys, const std::vector<double>& load,
                              const CgOptions& opts) {
    if (static_cast<int>(load.size()) != sys.n_free())
        throw std::invalid_argument("solve_poisson: load vector size mismatch");
    CgResult cg = cg_solve(sys.A, load, opts);
    PoissonSolution sol;
    sol.v = sys.restrict_to_base(cg.x);
    sol.energy = 0.5 * sys.A.bilinear(cg.x, cg.x) - dot(load, cg.x);
    sol.stats = {cg.iterations, cg.residual};
    sol.u = std::move(cg.x);
    return sol;
}

std::vector<double> harmonic_extension(const ExtensionSystem& sys,
                                       const std::vector<double>& v_base,
                                       const CgOptions& opts) {
    check_base_size(sys, v_base);
    const InteriorSplit sp = split_interior(sys);
    const int ni = static_cast<int>(sp.free_of_interior.size());

    // u over free indices with base data in place, zeros in the interior
    std::vector<double> u(sys.n_free(), 0.0);
    for (int b = 0; b < sys.n_base(); ++b) u[sys.base_to_free[b]] = v_base[b];

    // interior block and rhs -A_IB v extracted in one pass over A
    std::vector<Triplet> tri;
    std::vector<double> rhs(ni, 0.0);
    const auto& rp = sys.A.row_ptr();
    const auto& ci = sys.A.col_idx();
    const auto& vv = sys.A.values();
    for (int f = 0; f < sys.n_free(); ++f) {
        const int ri = sp.interior_of_free[f];
        if (ri < 0) continue;
        for (int k = rp[f]; k < rp[f + 1]; ++k) {
            const int cj = sp.interior_of_free[ci[k]];
            if (cj >= 0)
                tri.push_back({ri, cj, vv[k]});
            else
                rhs[ri] -= vv[k] * u[ci[k]];
        }
    }
    SparseMatrix AII = SparseMatrix::from_triplets(ni, ni, std::move(tri));
    CgResult cg = cg_solve(AII, rhs, opts);
    for (int i = 0; i < ni; ++i) u[sp.free_of_interior[i]] = cg.x[i];
    return u;
}

std::vector<double> penalty_extension(const ExtensionSystem& sys,
                                      const std::vector<double>& v_base, double mu,
                                      const CgOptions& opts) {
    check_base_size(sys, v_base);
    if (!(mu > 0.0)) throw std::invalid_argument("penalty_extension: mu must be positive");

    // A + mu * E with E = M_base embedded into base rows/columns
    std::vector<Triplet> tri;
    const auto& rp = sys.A.row_ptr();
    const auto& ci = sys.A.col_idx();
    const auto& vv = sys.A.values();
    for (int f = 0; f < sys.n_free(); ++f)
        for (int k = rp[f]; k < rp[f + 1]; ++k) tri.push_back({f, ci[k], vv[k]});
    const auto& brp = sys.M_base.row_ptr();
    const auto& bci = sys.M_base.col_idx();
    const auto& bvv = sys.M_base.values();
    for (int b = 0; b < sys.n_base(); ++b)
        for (int k = brp[b]; k < brp[b + 1]; ++k)
            tri.push_back({sys.base_to_free[b], sys.base_to_free[bci[k]], mu * bvv[k]});
    SparseMatrix Amu = SparseMatrix::from_triplets(sys.n_free(), sys.n_free(), std::move(tri));

    std::vector<double> Mv = sys.M_base.apply(v_base);
    std::vector<double> rhs(sys.n_free(), 0.0);
    for (int b = 0; b < sys.n_base(); ++b) rhs[sys.base_to_free[b]] = mu * Mv[b];

    CgResult cg = cg_solve(Amu, rhs, opts);
    return std::move(cg.x);
}

double base_violation(const ExtensionSystem& sys, const std::vector<double>& u_free,
                      const std::vector<double>& v_base) {
    check_base_size(sys, v_base);
    std::vector<double> d = sys.restrict_to_base(u_free);
    for (int b = 0; b < sys.n_base(); ++b) d[b] -= v_base[b];
    return std::sqrt(sys.M_base.bilinear(d, d));
}

double extension_energy(const ExtensionSystem& sys, const std::vector<double>& u_free) {
    return 0.5 * sys.A.bilinear(u_free, u_free);
}

DtNResult apply_operator(const ExtensionSystem& sys, const std::vector<double>& v_base,
                         const CgOptions& opts) {
    check_base_size(sys, v_base);
    std::vector<double> u = harmonic_extension(sys, v_base, opts);
    std::vector<double> Au = sys.A.apply(u);
    DtNResult res;
    res.raw_residual.resize(sys.n_base());
    for (int b = 0; b < sys.n_base(); ++b) res.raw_residual[b] = Au[sys.base_to_free[b]];
    CgOptions mass_opts = opts;
    mass_opts.x0 = nullptr;
    CgResult cg = cg_solve(sys.M_base, res.raw_residual, mass_opts);
    res.lambda = std::move(cg.x);
    return res;
}

double poincare_constant(const ExtensionSystem& sys, const EigOptions& opts) {
    EigResult eig = smallest_generalized_eig(sys.A, sys.M_w, opts);
    if (!(eig.nu > 0.0))
        throw NonConvergence("poincare_constant: nonpositive smallest eigenvalue",
                             eig.iterations, 0.0);
    return 1.0 / std::sqrt(eig.nu);
}

} // namespace varfrac
