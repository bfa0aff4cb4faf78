#pragma once

#include <array>
#include <functional>
#include <vector>

namespace varfrac {

/// Spatial point in the unit box; only the first `dim` entries are used.
using Point = std::array<double, 2>;

enum class OrderKind { Constant, Step, DistanceBased };

/// Axis-aligned box cell of a step field: box[axis] = {lo, hi}.
struct StepCell {
    std::array<std::array<double, 2>, 2> box{{{0.0, 1.0}, {0.0, 1.0}}};
    double value = 0.5;
};

/// Spatially variable fractional order s(x) on Omega = (0,1)^N, N in {1,2}.
///
/// Three kinds:
///  - Constant: s(x) = value.
///  - Step: piecewise constant on axis-aligned cells whose closures cover
///    [0,1]^N with disjoint interiors. Lookup treats cells as half-open
///    [lo, hi) except at the upper domain boundary, so every point resolves
///    to exactly one cell.
///  - DistanceBased: s(x) = sigma * min(dist(x, anchors), eps).
///
/// Every evaluation is clamped into [s_min, s_max] \subset (0,1); the clamp
/// is the regularization that keeps the extension weight uniformly in the
/// admissible range.
class OrderField {
  public:
    static OrderField constant(int dim, double value);
    static OrderField step(int dim, std::vector<StepCell> cells);
    static OrderField distance_based(int dim, double sigma, double eps,
                                     std::vector<Point> anchors);

    /// Clamped evaluation.
    double operator()(const Point& x) const;
    /// Pre-clamp evaluation (used by diagnostics and the clamp tests).
    double raw(const Point& x) const;

    /// Mean of the clamped order over Omega: exact for Constant/Step,
    /// composite Gauss quadrature for DistanceBased.
    double mean() const;

    int dim() const { return dim_; }
    OrderKind kind() const { return kind_; }
    double s_min() const { return s_min_; }
    double s_max() const { return s_max_; }
    double constant_value() const { return constant_value_; }
    double sigma() const { return sigma_; }
    double eps() const { return eps_; }
    const std::vector<StepCell>& cells() const { return cells_; }
    const std::vector<Point>& anchors() const { return anchors_; }

    /// Overrides the clamp bounds (0 < s_min <= s_max < 1 enforced).
    void set_clamp(double s_min, double s_max);

  private:
    OrderField() = default;
    void validate() const;

    int dim_ = 1;
    OrderKind kind_ = OrderKind::Constant;
    double constant_value_ = 0.5;
    std::vector<StepCell> cells_;
    double sigma_ = 0.5;
    double eps_ = 0.4;
    std::vector<Point> anchors_;
    double s_min_ = 0.05;
    double s_max_ = 0.95;
};

/// Normalization in front of the y^{1-2s(x)} weight.
///  - MeanConstant: G evaluated once at the mean order s_bar,
///    G = 2^{2 s_bar - 1} Gamma(s_bar) / Gamma(1 - s_bar).
///  - Pointwise:    G(x) = 2^{2 s(x) - 1} Gamma(s(x)) / Gamma(1 - s(x)).
///  - Unit:         G = 1 (diagnostics; makes closed-form cross-checks exact).
enum class GsVariant { MeanConstant, Pointwise, Unit };

/// The Gamma-ratio normalization at a single order value.
double gs_constant(double s);

/// Full description of the degenerate cylinder weight
///   w(x, y) = G_s(x) * y^{delta(x)},  delta(x) = 1 - 2 s(x) in (-1, 1),
/// together with the trace weight
///   w_tilde(x) = G_s(x) * (p - 2 + 2 s(x))^p.
class WeightSpec {
  public:
    WeightSpec(OrderField order, GsVariant g = GsVariant::Pointwise, double p = 2.0);

    double eval_order(const Point& x) const { return order_(x); }
    double delta(const Point& x) const { return 1.0 - 2.0 * order_(x); }
    double eval_G(const Point& x) const;
    double eval_weight(const Point& x, double y) const;
    double eval_trace_weight(const Point& x) const;

    const OrderField& order() const { return order_; }
    GsVariant g_variant() const { return g_; }
    double p() const { return p_; }
    double p_conjugate() const { return p_ / (p_ - 1.0); }
    double mean_order() const { return mean_order_; }

  private:
    OrderField order_;
    GsVariant g_ = GsVariant::Pointwise;
    double p_ = 2.0;
    double mean_order_ = 0.5; // cached; G for MeanConstant uses it
};

/// Outcome of the one-dimensional weight-integrability probe
///   \int_0^1 ( G_s(x) |x_i - z|^{1-2 s(x)} )^{1-p'} dx_i  (other coords fixed)
/// evaluated by dyadic grading toward x_i = z.
struct H5Result {
    bool converged = false;
    bool suspected_divergent = false;
    double value = 0.0;
    int levels = 0;
};

/// Probe along `axis` through the point x0 (transverse coordinates of x0 are
/// held fixed; x0 defaults to the domain center).
H5Result check_H5(const WeightSpec& spec, double z, int axis,
                  const Point& x0 = {0.5, 0.5});

/// Same probe for an arbitrary order/normalization pair; lets callers test
/// order profiles outside the OrderField kinds (and unclamped ones).
H5Result check_H5_generic(const std::function<double(const Point&)>& order,
                          const std::function<double(const Point&)>& G, double p, int dim,
                          double z, int axis, const Point& x0 = {0.5, 0.5});

} // namespace varfrac
