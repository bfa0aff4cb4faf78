#pragma once

#include "varfrac/assembly.hpp"
#include "varfrac/order_field.hpp"

#include <functional>
#include <string>
#include <vector>

namespace varfrac {

/// Parameters shared by the singular-integral machinery. quad_level sets the
/// dyadic depth: the near-diagonal exclusion band for the seminorms has
/// half-width 2^{-quad_level}.
struct SeminormConfig {
    double p = 2.0;
    int quad_level = 14;
    double sigma = 0.5;
    double p_conjugate() const { return p / (p - 1.0); }
};

/// Piecewise-linear function on the uniform grid over [0,1] (endpoints
/// included); the carrier for base traces.
class GridFunction1D {
  public:
    explicit GridFunction1D(std::vector<double> values);

    double operator()(double t) const;
    int cells() const { return static_cast<int>(values_.size()) - 1; }
    const std::vector<double>& values() const { return values_; }
    double max_abs_slope() const;

  private:
    std::vector<double> values_;
};

// --- closed-form inequality constants --------------------------------------

/// (p+1) sigma^{-2/p'}: the plain trace constant. p=2, sigma=1/2 gives 6.
double trace_constant(double p, double sigma);
/// (C_H(p) 2^p 2^{p/2} (2^{p-1}+1) + (1+p)^p sigma^{-2p/p'})^{1/p}:
/// the improved trace constant. p=2, sigma=1/2 gives sqrt(132).
double improved_trace_constant(double p, double sigma);
/// p^p/(p-1)^{p-1}: the weighted Hardy constant (4 at p=2).
double hardy_constant(double p);
/// p^p/(eps-p+1)^p for eps > p-1: the classical Hardy constant.
double hardy_classical_constant(double p, double eps);

// --- norms ------------------------------------------------------------------

/// (\int_0^1 w_tilde |v|^p)^{1/p} with w_tilde = G_s(x)(p-2+2s(x))^p,
/// per-cell Gauss quadrature against the true (unfrozen) weight. N=1.
double trace_norm(const WeightSpec& spec, const GridFunction1D& v, double p);

/// Same norm for a base-node vector on the mesh (N=1 or 2); boundary values
/// are the trace zeros of the extension space.
double trace_norm_base(const ExtensionSystem& sys, const std::vector<double>& v_base,
                       double p);

/// Full weighted Sobolev norm (\int_C w |u|^p + \int_C w |grad u|^p)^{1/p}
/// of a free-node vector, by element quadrature against the true weight:
/// Gauss in x, exact y-moments for p=2, graded y-quadrature with an analytic
/// bottom tail for p>2.
double weighted_sobolev_norm(const ExtensionSystem& sys, const std::vector<double>& u_free,
                             double p);

// --- inequality checks -------------------------------------------------------

struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = true;
    bool seminorm_divergent = false; ///< graded levels failed the ratio test
    double seminorm_remainder = 0.0; ///< near-diagonal bound folded into lhs
};

/// lhs = trace norm of u|_BASE, rhs = (p+1)sigma^{-2/p'} ||u||_{W^{1,p}(C,w)}.
/// Requires tau >= 1 or sigma == tau.
InequalityCheck trace_inequality_check(const ExtensionSystem& sys, const WeightSpec& spec,
                                       const std::vector<double>& u_free, double sigma);

/// lhs = (trace_norm^p + A_1(u|_BASE) + remainder)^{1/p} against the improved
/// constant. N=1 only; the A_1 remainder bound is included on the left side.
InequalityCheck improved_trace_check(const ExtensionSystem& sys, const WeightSpec& spec,
                                     const std::vector<double>& u_free, double sigma,
                                     const SeminormConfig& cfg = {});

// --- fractional-space weights and seminorm ----------------------------------

struct PhiWeights {
    double Phi = 0.0; ///< G_s(x') |t - tau|^{1-2s(x')} at x' = x with x'_i = t
    double phi = 0.0; ///< Phi^{1-p'} (int over the i-th coordinate)^{-p}
    double psi = 0.0; ///< Phi^{1-p'} (int over the second argument)^{-p}
    double w = 0.0;   ///< min(phi, psi)
};

/// Evaluates the weight family at the pair (x with x_i = t, tau_pt). The phi
/// inner integral is closed-form on constant-order stretches (Constant and
/// Step fields) and dyadically graded for distance fields; the psi inner
/// integral is always closed-form. t must differ from tau_pt.
PhiWeights phi_weights(const WeightSpec& spec, double p, int axis, const Point& x, double t,
                       double tau_pt, int quad_level = 14);

struct SeminormResult {
    double value = 0.0;
    double remainder = 0.0; ///< rigorous bound on the excluded diagonal band
    bool converged = true;
    bool suspected_divergent = false;
};

/// A_i(v) = \int\int w_i(x^i_t, tau) |v(t) - v(tau)|^p dtau dt for N=1:
/// tensor quadrature off the diagonal, dyadic shells toward t=tau, and the
/// band |t-tau| < 2^{-quad_level} bounded through the Lipschitz estimate of
/// the piecewise-linear v and reported as `remainder`.
SeminormResult seminorm_A(const WeightSpec& spec, double p, const GridFunction1D& v,
                          int axis = 0, const SeminormConfig& cfg = {});

/// N=2 variant: the transverse coordinate is averaged with a 5-point Gauss
/// rule; each slice is sampled onto `slice_pts` uniform nodes and fed to the
/// 1D engine.
SeminormResult seminorm_A_transverse(const WeightSpec& spec, double p,
                                     const std::function<double(const Point&)>& v, int axis,
                                     int slice_pts, const SeminormConfig& cfg = {});

// --- Hardy inequalities ------------------------------------------------------

struct HardyCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double constant = 0.0;
    bool holds = false;
    bool precondition_ok = true;
};

/// Weighted Hardy on (a,b): lhs = \int rho_hat |f|^p with
/// rho_hat = rho^{1-p'} (\int_a^t rho^{1-p'})^{-p}, rhs = C_H(p) \int rho |f'|^p.
/// Preconditions: \int_a^b rho^{1-p'} < inf (probed by graded quadrature)
/// and f(a+) = 0.
HardyCheck hardy_weighted_check(const std::function<double(double)>& rho,
                                const std::function<double(double)>& f,
                                const std::function<double(double)>& fprime, double a,
                                double b, double p, int quad_level = 14);

/// Classical Hardy with weight exponent eps > p-1 on (0, support):
/// lhs = \int t^{eps-p}|f|^p, rhs = C_H(p,eps) \int t^eps |f'|^p; f vanishes
/// beyond `support`.
HardyCheck hardy_classical_check(const std::function<double(double)>& f,
                                 const std::function<double(double)>& fprime, double p,
                                 double eps, double support, int quad_level = 14);

// --- reporting ---------------------------------------------------------------

/// One row of an inequality-suite report.
struct InequalityRow {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0; ///< rhs - lhs
    bool holds = true;
};

} // namespace varfrac
