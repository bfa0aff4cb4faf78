#pragma once

#include <functional>
#include <vector>

namespace varfrac {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Returns the n-point Gauss-Legendre rule. Nodes are computed once per order
/// by Newton iteration on the Legendre recurrence and cached; thread-safe.
const GaussRule& gauss_legendre(int n);

/// \int_a^b f dt with a single n-point Gauss panel.
double integrate(const std::function<double(double)>& f, double a, double b, int n);

/// Composite Gauss: [a,b] split into `cells` equal pieces, n points each.
double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int cells, int n);

/// Outcome of a dyadically graded integration toward one singular endpoint.
struct GradedResult {
    double value = 0.0;
    bool converged = false;           ///< successive partial sums agreed to rel_tol
    bool suspected_divergent = false; ///< growth ratio tripped, or level budget exhausted
    int levels_used = 0;
};

struct GradedOptions {
    int max_levels = 400;         ///< dyadic shells toward the singular endpoint
    int points_per_level = 8;     ///< Gauss order per shell
    double rel_tol = 1e-6;        ///< successive-agreement stop on completed values
    double divergence_ratio = 0.98; ///< shell ratio >= this, sustained => divergent
};

/// \int_a^b f dt where f may have a power-law singularity at exactly one
/// endpoint. The interval is split into dyadic shells accumulating toward the
/// singular end. Shell integrals of t^{-q} decay geometrically with ratio
/// 2^{q-1} (< 1 exactly when integrable), so the measured shell ratio r both
/// classifies the singularity and completes the tail as shell * r / (1-r);
/// integration stops when two successive completed values agree to rel_tol,
/// and the completion is included in `value`. Shell ratios staying above
/// divergence_ratio for four levels, or a spent level budget, classify as
/// suspected_divergent.
GradedResult integrate_graded(const std::function<double(double)>& f, double a, double b,
                              bool singular_at_a, const GradedOptions& opts = {});

} // namespace varfrac
