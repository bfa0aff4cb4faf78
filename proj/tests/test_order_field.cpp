#include <varfrac/order_field.hpp>
#include <varfrac/quadrature.hpp>

#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <cstdint>

using namespace varfrac;

namespace {

// tiny deterministic generator for property sweeps
struct Lcg {
    std::uint64_t s;
    explicit Lcg(std::uint64_t seed) : s(seed) {}
    double uniform() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(s >> 11) * 0x1.0p-53;
    }
    double range(double a, double b) { return a + (b - a) * uniform(); }
};

OrderField two_cell_step() {
    std::vector<StepCell> cells(2);
    cells[0].box[0] = {0.0, 0.5};
    cells[0].value = 0.3;
    cells[1].box[0] = {0.5, 1.0};
    cells[1].value = 0.7;
    return OrderField::step(1, std::move(cells));
}

} // namespace

TEST_SUITE_BEGIN("order_field");

TEST_CASE("constant field evaluates and pins its clamp to the value") {
    OrderField f = OrderField::constant(1, 0.37);
    CHECK(f.kind() == OrderKind::Constant);
    CHECK(f({0.1, 0.0}) == 0.37);
    CHECK(f({0.9, 0.0}) == 0.37);
    CHECK(f.s_min() == 0.37);
    CHECK(f.s_max() == 0.37);
    CHECK(f.mean() == doctest::Approx(0.37).epsilon(1e-15));
    CHECK_THROWS_AS(OrderField::constant(1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(OrderField::constant(1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(OrderField::constant(3, 0.5), std::invalid_argument);
}

TEST_CASE("step lookup is half-open with the upper face owned by the last cell") {
    OrderField f = two_cell_step();
    CHECK(f({0.0, 0.0}) == 0.3);
    CHECK(f({0.499999, 0.0}) == 0.3);
    CHECK(f({0.5, 0.0}) == 0.7); // boundary belongs to the right cell
    CHECK(f({0.75, 0.0}) == 0.7);
    CHECK(f({1.0, 0.0}) == 0.7); // top face still resolves
    CHECK(f.s_min() == 0.3);
    CHECK(f.s_max() == 0.7);
    CHECK(f.mean() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("step cover validation rejects gaps, overlaps, and bad values") {
    std::vector<StepCell> gap(2);
    gap[0].box[0] = {0.0, 0.4};
    gap[1].box[0] = {0.5, 1.0};
    CHECK_THROWS_AS(OrderField::step(1, gap), std::invalid_argument);

    std::vector<StepCell> overlap(2);
    overlap[0].box[0] = {0.0, 0.6};
    overlap[1].box[0] = {0.5, 1.0};
    CHECK_THROWS_AS(OrderField::step(1, overlap), std::invalid_argument);

    std::vector<StepCell> bad(1);
    bad[0].box[0] = {0.0, 1.0};
    bad[0].value = 1.5;
    CHECK_THROWS_AS(OrderField::step(1, bad), std::invalid_argument);
}

TEST_CASE("2d step field over quadrants") {
    const double values[4] = {0.2, 0.3, 0.4, 0.5};
    std::vector<StepCell> cells(4);
    int i = 0;
    for (double x0 : {0.0, 0.5})
        for (double y0 : {0.0, 0.5}) {
            cells[i].box[0] = {x0, x0 + 0.5};
            cells[i].box[1] = {y0, y0 + 0.5};
            cells[i].value = values[i];
            ++i;
        }
    OrderField f = OrderField::step(2, std::move(cells));
    CHECK(f({0.25, 0.25}) == 0.2);
    CHECK(f({0.25, 0.75}) == 0.3);
    CHECK(f({0.75, 0.25}) == 0.4);
    CHECK(f({0.75, 0.75}) == 0.5);
    CHECK(f.mean() == doctest::Approx(0.35).epsilon(1e-15));
}

TEST_CASE("distance field: clamp floors the anchor dip, eps caps the growth") {
    OrderField f = OrderField::distance_based(1, 0.5, 0.4, {Point{0.5, 0.0}});
    // raw at the anchor is 0; the default clamp floor rescues it
    CHECK(f.raw({0.5, 0.0}) == 0.0);
    CHECK(f({0.5, 0.0}) == f.s_min());
    CHECK(f.s_min() > 0.0);
    // far away the distance saturates at eps
    CHECK(f({0.0, 0.0}) == doctest::Approx(0.5 * 0.4).epsilon(1e-15));
    // clamped everywhere
    Lcg rng(7);
    for (int k = 0; k < 200; ++k) {
        double v = f({rng.uniform(), 0.0});
        CHECK(v >= f.s_min());
        CHECK(v <= f.s_max());
    }
    // mean agrees with an independent composite quadrature of the field
    double m = integrate_composite([&](double t) { return f({t, 0.0}); }, 0.0, 1.0, 256, 6);
    CHECK(f.mean() == doctest::Approx(m).epsilon(1e-6));
}

TEST_CASE("set_clamp tightens evaluations and validates its arguments") {
    OrderField f = OrderField::distance_based(1, 0.9, 1.0, {Point{0.0, 0.0}});
    f.set_clamp(0.3, 0.6);
    Lcg rng(11);
    for (int k = 0; k < 200; ++k) {
        double x = rng.uniform();
        double v = f({x, 0.0});
        CHECK(v >= 0.3);
        CHECK(v <= 0.6);
        double raw = f.raw({x, 0.0});
        if (raw >= 0.3 && raw <= 0.6) CHECK(v == raw);
    }
    CHECK_THROWS_AS(f.set_clamp(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(f.set_clamp(0.6, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(f.set_clamp(0.5, 1.0), std::invalid_argument);
}

TEST_CASE("normalization constant pins reference values") {
    CHECK(gs_constant(0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gs_constant(0.25) == doctest::Approx(2.0920992401062033).epsilon(1e-13));
    CHECK(gs_constant(0.75) == doctest::Approx(0.47798879748612500).epsilon(1e-13));
    CHECK(gs_constant(0.3) == doctest::Approx(1.7466014585250251).epsilon(1e-13));
}

TEST_CASE("weight spec: the three normalization variants") {
    OrderField f = two_cell_step();
    Point left{0.25, 0.0}, right{0.75, 0.0};

    WeightSpec pw(f, GsVariant::Pointwise);
    CHECK(pw.eval_G(left) == doctest::Approx(gs_constant(0.3)).epsilon(1e-14));
    CHECK(pw.eval_G(right) == doctest::Approx(gs_constant(0.7)).epsilon(1e-14));

    WeightSpec mc(f, GsVariant::MeanConstant);
    CHECK(mc.mean_order() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(mc.eval_G(left) == doctest::Approx(gs_constant(0.5)).epsilon(1e-13));
    CHECK(mc.eval_G(left) == mc.eval_G(right));

    WeightSpec unit(f, GsVariant::Unit);
    CHECK(unit.eval_G(left) == 1.0);
    CHECK(unit.eval_G(right) == 1.0);
}

TEST_CASE("weight symmetry: w(x,y) * w(x,1/y) = G(x)^2 for every variant") {
    OrderField fields[3] = {OrderField::constant(1, 0.35), two_cell_step(),
                            OrderField::distance_based(1, 0.5, 0.4, {Point{0.5, 0.0}})};
    for (const auto& f : fields)
        for (GsVariant g : {GsVariant::MeanConstant, GsVariant::Pointwise, GsVariant::Unit}) {
            WeightSpec spec(f, g);
            Lcg rng(23);
            for (int k = 0; k < 100; ++k) {
                Point x{rng.uniform(), 0.0};
                double y = std::exp(rng.range(-4.0, 4.0));
                double prod = spec.eval_weight(x, y) * spec.eval_weight(x, 1.0 / y);
                double G = spec.eval_G(x);
                CHECK(prod == doctest::Approx(G * G).epsilon(1e-11));
            }
        }
}

TEST_CASE("order one half collapses the weights to unity at p=2") {
    WeightSpec spec(OrderField::constant(1, 0.5), GsVariant::Pointwise, 2.0);
    Lcg rng(3);
    for (int k = 0; k < 50; ++k) {
        Point x{rng.uniform(), 0.0};
        CHECK(spec.eval_weight(x, std::exp(rng.range(-3.0, 3.0))) ==
              doctest::Approx(1.0).epsilon(1e-14));
        CHECK(spec.eval_trace_weight(x) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("trace weight formula") {
    // w_tilde = G (p-2+2s)^p
    OrderField f = OrderField::constant(1, 0.3);
    for (double p : {2.0, 3.0}) {
        WeightSpec spec(f, GsVariant::Pointwise, p);
        double expect = gs_constant(0.3) * std::pow(p - 2.0 + 0.6, p);
        CHECK(spec.eval_trace_weight({0.4, 0.0}) == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("integrability probe: constant order matches the closed form") {
    WeightSpec spec(OrderField::constant(1, 0.3), GsVariant::Pointwise, 2.0);
    H5Result r = check_H5(spec, 0.5, 0);
    CHECK(r.converged);
    CHECK_FALSE(r.suspected_divergent);
    // int_0^1 (G |t-z|^{delta})^{-1} dt = (z^{1-d} + (1-z)^{1-d}) / ((1-d) G)
    CHECK(r.value == doctest::Approx(1.2591194405307131).epsilon(1e-5));
}

TEST_CASE("integrability probe: step fields always converge") {
    WeightSpec spec(two_cell_step(), GsVariant::Pointwise, 2.0);
    for (double z : {0.1, 0.5, 0.9}) {
        H5Result r = check_H5(spec, z, 0);
        CHECK(r.converged);
        CHECK_FALSE(r.suspected_divergent);
        CHECK(r.value > 0.0);
    }
}

TEST_CASE("integrability probe: the critical unclamped dip diverges, elsewhere it converges") {
    // order s(t) = sigma |t - z0| with no clamp and unit normalization: at the
    // dip the integrand behaves like |t-z0|^{-1+2 sigma |t-z0|}, which is not
    // integrable; probing any other point sees a bounded positive order.
    const double z0 = 0.5, sigma = 0.5;
    auto order = [=](const Point& x) { return sigma * std::abs(x[0] - z0); };
    auto G = [](const Point&) { return 1.0; };

    H5Result at_dip = check_H5_generic(order, G, 2.0, 1, z0, 0);
    CHECK(at_dip.suspected_divergent);
    CHECK_FALSE(at_dip.converged);

    H5Result away = check_H5_generic(order, G, 2.0, 1, 0.25, 0);
    CHECK(away.converged);
    CHECK_FALSE(away.suspected_divergent);
}

TEST_CASE("integrability probe: the clamp rescues the critical dip") {
    OrderField f = OrderField::distance_based(1, 0.5, 0.4, {Point{0.5, 0.0}});
    // clamp floor 0.05 keeps the weight exponent strictly above -1
    WeightSpec spec(f, GsVariant::Pointwise, 2.0);
    H5Result r = check_H5(spec, 0.5, 0);
    CHECK(r.converged);
    CHECK_FALSE(r.suspected_divergent);
}

TEST_SUITE_END();
