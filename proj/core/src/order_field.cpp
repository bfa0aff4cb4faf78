#include "varfrac/order_field.hpp"

#include "varfrac/quadrature.hpp"
#include "varfrac/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace varfrac {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

OrderField OrderField::constant(int dim, double value) {
    OrderField f;
    f.dim_ = dim;
    f.kind_ = OrderKind::Constant;
    f.constant_value_ = value;
    require(value > 0.0 && value < 1.0, "OrderField: constant order must lie in (0,1)");
    f.s_min_ = value;
    f.s_max_ = value;
    f.validate();
    return f;
}

OrderField OrderField::step(int dim, std::vector<StepCell> cells) {
    OrderField f;
    f.dim_ = dim;
    f.kind_ = OrderKind::Step;
    require(!cells.empty(), "OrderField: step field needs at least one cell");
    double lo = 1.0, hi = 0.0, vol = 0.0;
    for (const auto& c : cells) {
        require(c.value > 0.0 && c.value < 1.0, "OrderField: step values must lie in (0,1)");
        lo = std::min(lo, c.value);
        hi = std::max(hi, c.value);
        double v = 1.0;
        for (int d = 0; d < dim; ++d) {
            require(c.box[d][0] >= 0.0 && c.box[d][1] <= 1.0 && c.box[d][0] < c.box[d][1],
                    "OrderField: step cell boxes must be nondegenerate within [0,1]^N");
            v *= c.box[d][1] - c.box[d][0];
        }
        vol += v;
    }
    require(std::abs(vol - 1.0) < 1e-9, "OrderField: step cells must cover [0,1]^N");
    f.cells_ = std::move(cells);
    f.s_min_ = lo;
    f.s_max_ = hi;
    f.validate();
    return f;
}

OrderField OrderField::distance_based(int dim, double sigma, double eps,
                                      std::vector<Point> anchors) {
    OrderField f;
    f.dim_ = dim;
    f.kind_ = OrderKind::DistanceBased;
    require(sigma > 0.0, "OrderField: sigma must be positive");
    require(eps > 0.0, "OrderField: eps must be positive");
    require(!anchors.empty(), "OrderField: distance field needs at least one anchor");
    f.sigma_ = sigma;
    f.eps_ = eps;
    f.anchors_ = std::move(anchors);
    f.validate();
    return f;
}

void OrderField::validate() const {
    require(dim_ == 1 || dim_ == 2, "OrderField: dimension must be 1 or 2");
    require(s_min_ > 0.0 && s_min_ <= s_max_ && s_max_ < 1.0,
            "OrderField: clamp bounds must satisfy 0 < s_min <= s_max < 1");
}

void OrderField::set_clamp(double s_min, double s_max) {
    s_min_ = s_min;
    s_max_ = s_max;
    validate();
}

double OrderField::raw(const Point& x) const {
    switch (kind_) {
    case OrderKind::Constant:
        return constant_value_;
    case OrderKind::Step: {
        // half-open cells [lo, hi); the last cell along each axis also owns
        // its upper face so the closed box is fully covered
        for (const auto& c : cells_) {
            bool inside = true;
            for (int d = 0; d < dim_; ++d) {
                const double lo = c.box[d][0], hi = c.box[d][1];
                const bool top = hi >= 1.0;
                if (!(x[d] >= lo && (x[d] < hi || (top && x[d] <= hi)))) {
                    inside = false;
                    break;
                }
            }
            if (inside) return c.value;
        }
        throw std::invalid_argument("OrderField: point escapes the step cover");
    }
    case OrderKind::DistanceBased: {
        double d2min = std::numeric_limits<double>::infinity();
        for (const auto& a : anchors_) {
            double d2 = 0.0;
            for (int d = 0; d < dim_; ++d) d2 += (x[d] - a[d]) * (x[d] - a[d]);
            d2min = std::min(d2min, d2);
        }
        return sigma_ * std::min(std::sqrt(d2min), eps_);
    }
    }
    return constant_value_;
}

double OrderField::operator()(const Point& x) const {
    return std::clamp(raw(x), s_min_, s_max_);
}

double OrderField::mean() const {
    switch (kind_) {
    case OrderKind::Constant:
        return std::clamp(constant_value_, s_min_, s_max_);
    case OrderKind::Step: {
        double acc = 0.0;
        for (const auto& c : cells_) {
            double v = 1.0;
            for (int d = 0; d < dim_; ++d) v *= c.box[d][1] - c.box[d][0];
            acc += v * std::clamp(c.value, s_min_, s_max_);
        }
        return acc;
    }
    case OrderKind::DistanceBased: {
        // composite Gauss; the integrand is Lipschitz, kinks at anchor
        // equidistance sets and at distance eps keep this a quadrature mean
        const int cells = 64, npt = 5;
        if (dim_ == 1) {
            double acc = 0.0;
            auto f = [&](double t) { return (*this)(Point{t, 0.0}); };
            acc = integrate_composite(f, 0.0, 1.0, cells, npt);
            return acc;
        }
        const GaussRule& rule = gauss_legendre(npt);
        double acc = 0.0;
        const double h = 1.0 / cells;
        for (int i = 0; i < cells; ++i) {
            for (int j = 0; j < cells; ++j) {
                for (int qi = 0; qi < npt; ++qi) {
                    for (int qj = 0; qj < npt; ++qj) {
                        const double xq = (i + 0.5 + 0.5 * rule.nodes[qi]) * h;
                        const double yq = (j + 0.5 + 0.5 * rule.nodes[qj]) * h;
                        acc += 0.25 * h * h * rule.weights[qi] * rule.weights[qj] *
                               (*this)(Point{xq, yq});
                    }
                }
            }
        }
        return acc;
    }
    }
    return 0.5;
}

double gs_constant(double s) {
    require(s > 0.0 && s < 1.0, "gs_constant: order must lie in (0,1)");
    return std::pow(2.0, 2.0 * s - 1.0) * gamma_fn(s) / gamma_fn(1.0 - s);
}

WeightSpec::WeightSpec(OrderField order, GsVariant g, double p)
    : order_(std::move(order)), g_(g), p_(p) {
    require(p_ >= 2.0, "WeightSpec: p must be >= 2");
    mean_order_ = order_.mean();
}

double WeightSpec::eval_G(const Point& x) const {
    switch (g_) {
    case GsVariant::MeanConstant:
        return gs_constant(mean_order_);
    case GsVariant::Pointwise:
        return gs_constant(order_(x));
    case GsVariant::Unit:
        return 1.0;
    }
    return 1.0;
}

double WeightSpec::eval_weight(const Point& x, double y) const {
    require(y >= 0.0, "WeightSpec: weight is defined for y >= 0");
    return eval_G(x) * std::pow(y, delta(x));
}

double WeightSpec::eval_trace_weight(const Point& x) const {
    const double s = order_(x);
    return eval_G(x) * std::pow(p_ - 2.0 + 2.0 * s, p_);
}

H5Result check_H5_generic(const std::function<double(const Point&)>& order,
                          const std::function<double(const Point&)>& G, double p, int dim,
                          double z, int axis, const Point& x0) {
    require(z > 0.0 && z < 1.0, "check_H5: z must lie in (0,1)");
    require(axis >= 0 && axis < dim, "check_H5: axis out of range");
    const double pc = p / (p - 1.0);
    auto integrand = [&](double t) {
        Point x = x0;
        x[axis] = t;
        const double s = order(x);
        const double deltav = 1.0 - 2.0 * s;
        return std::pow(G(x) * std::pow(std::abs(t - z), deltav), 1.0 - pc);
    };
    // both sides of the interior singularity, each graded toward z
    GradedOptions opts;
    GradedResult left = integrate_graded(integrand, 0.0, z, /*singular_at_a=*/false, opts);
    GradedResult right = integrate_graded(integrand, z, 1.0, /*singular_at_a=*/true, opts);
    H5Result res;
    res.levels = std::max(left.levels_used, right.levels_used);
    res.suspected_divergent = left.suspected_divergent || right.suspected_divergent;
    res.converged = left.converged && right.converged;
    res.value = left.value + right.value;
    return res;
}

H5Result check_H5(const WeightSpec& spec, double z, int axis, const Point& x0) {
    return check_H5_generic([&](const Point& x) { return spec.eval_order(x); },
                            [&](const Point& x) { return spec.eval_G(x); }, spec.p(),
                            spec.order().dim(), z, axis, x0);
}

} // namespace varfrac
