#pragma once

#include "varfrac/order_field.hpp"

#include <functional>
#include <vector>

namespace varfrac {

/// Dirichlet sine-basis expansion on Omega = (0,1)^N:
///   lambda_k = pi^2 |k|^2,  phi_k(x) = 2^{N/2} prod_i sin(k_i pi x_i),
/// holding coefficients b_k for multi-indices k in {1..K}^N
/// (index (k1-1) + K*(k2-1)).
struct SpectralField {
    int dim = 1;
    int modes = 0;
    std::vector<double> coeffs;

    double coeff(int k1, int k2 = 1) const;
    double eigenvalue(int k1, int k2 = 1) const;
    /// Point evaluation sum b_k phi_k(x).
    double evaluate(const Point& x) const;
    /// Parseval: sum of squared coefficients.
    double energy() const;
    /// Energy of the outermost shell max(k_i) = K; visible oracle truncation.
    double tail_shell_energy() const;
};

/// Coefficients b_k = \int f phi_k by tensor Gauss quadrature with quad_pts
/// points per axis (one panel; the rule out-resolves sin(K pi x) well before
/// quad_pts ~ 3K).
SpectralField analyze(const std::function<double(const Point&)>& f, int dim, int modes,
                      int quad_pts);

/// Coefficient-wise lambda_k^s b_k: the operator at constant order s.
SpectralField apply_power(const SpectralField& field, double s);

/// Coefficient-wise lambda_k^{-s} h_k: the constant-order Poisson solve.
SpectralField solve_power(const SpectralField& rhs, double s);

/// One-mode extension oracle: solves the weighted two-point problem
///   \int_0^tau y^{1-2s} (g' h' + lambda g h) dy = 0  for all test h,
///   g(0)=1, g(tau)=0
/// with linear elements on the graded grid y_j = tau (j/(n_y-1))^gamma and
/// closed-form y-moments, then returns the discrete weighted Neumann value
/// at y=0 scaled by the pointwise normalization G_s^{(2)}; this approximates
/// lambda^s. The flux is evaluated through the energy identity
/// g^T (K + lambda M) g — a sum of positive per-cell terms — because the
/// raw row-0 residual cancels catastrophically on strongly graded grids.
double mode_dtn_1d(double lambda, double s, int n_y, double gamma, double tau);

} // namespace varfrac
