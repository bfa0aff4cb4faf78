#include <varfrac/spectral_oracle.hpp>

#include <doctest.h>

#include <cmath>
#include <initializer_list>

using namespace varfrac;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_SUITE_BEGIN("spectral_oracle");

TEST_CASE("sine coefficients of x(1-x) pin the closed-form values") {
    SpectralField f = analyze([](const Point& x) { return x[0] * (1.0 - x[0]); }, 1, 8, 64);
    // against sqrt(2) sin(k pi x): b_k = 4 sqrt(2) / (k pi)^3 for odd k
    CHECK(f.coeff(1) == doctest::Approx(0.18244222961109435).epsilon(1e-12));
    CHECK(f.coeff(3) == doctest::Approx(0.0067571196152257168).epsilon(1e-11));
    CHECK(f.coeff(5) == doctest::Approx(0.0014595378368887548).epsilon(1e-10));
    CHECK(std::abs(f.coeff(2)) < 1e-15);
    CHECK(std::abs(f.coeff(4)) < 1e-15);
}

TEST_CASE("eigenvalues are pi^2 |k|^2") {
    SpectralField f1 = analyze([](const Point& x) { return x[0]; }, 1, 4, 32);
    CHECK(f1.eigenvalue(1) == doctest::Approx(kPi * kPi).epsilon(1e-14));
    CHECK(f1.eigenvalue(3) == doctest::Approx(9.0 * kPi * kPi).epsilon(1e-14));
    SpectralField f2 = analyze([](const Point& x) { return x[0] * x[1]; }, 2, 3, 24);
    CHECK(f2.eigenvalue(1, 2) == doctest::Approx(5.0 * kPi * kPi).epsilon(1e-14));
}

TEST_CASE("a pure 2d mode is picked out exactly") {
    auto f = [](const Point& x) { return std::sin(kPi * x[0]) * std::sin(2.0 * kPi * x[1]); };
    SpectralField field = analyze(f, 2, 4, 48);
    // basis is 2 sin(k1 pi x1) sin(k2 pi x2), so the coefficient is 1/2
    CHECK(field.coeff(1, 2) == doctest::Approx(0.5).epsilon(1e-12));
    for (int k1 = 1; k1 <= 4; ++k1)
        for (int k2 = 1; k2 <= 4; ++k2)
            if (!(k1 == 1 && k2 == 2)) CHECK(std::abs(field.coeff(k1, k2)) < 1e-12);
    CHECK(field.tail_shell_energy() < 1e-20);

    SUBCASE("evaluate reproduces the mode pointwise") {
        for (double x1 : {0.21, 0.5, 0.83})
            for (double x2 : {0.17, 0.64}) {
                Point x{x1, x2};
                CHECK(field.evaluate(x) == doctest::Approx(f(x)).epsilon(1e-10));
            }
    }
}

TEST_CASE("Parseval energy accounts for the smooth function") {
    SpectralField f = analyze([](const Point& x) { return x[0] * (1.0 - x[0]); }, 1, 16, 64);
    const double exact = 1.0 / 30.0; // int_0^1 x^2 (1-x)^2
    CHECK(f.energy() <= exact + 1e-12);
    CHECK(f.energy() == doctest::Approx(exact).epsilon(1e-5));
    // the outermost shell of a smooth expansion is negligible
    CHECK(f.tail_shell_energy() < 1e-8 * f.energy());
}

TEST_CASE("evaluate converges to the function as modes grow") {
    auto fn = [](const Point& x) { return x[0] * (1.0 - x[0]); };
    SpectralField coarse = analyze(fn, 1, 4, 64);
    SpectralField fine = analyze(fn, 1, 64, 256);
    double err_coarse = 0.0, err_fine = 0.0;
    for (int i = 1; i < 40; ++i) {
        Point x{i / 40.0, 0.0};
        err_coarse = std::max(err_coarse, std::abs(coarse.evaluate(x) - fn(x)));
        err_fine = std::max(err_fine, std::abs(fine.evaluate(x) - fn(x)));
    }
    CHECK(err_fine < err_coarse);
    CHECK(err_fine < 1e-5);
}

TEST_CASE("power application and solve invert each other mode by mode") {
    SpectralField f = analyze([](const Point& x) { return x[0] * (1.0 - x[0]); }, 1, 12, 64);
    for (double s : {0.25, 0.5, 0.75}) {
        SpectralField forward = apply_power(f, s);
        for (int k = 1; k <= 12; ++k)
            CHECK(forward.coeff(k) ==
                  doctest::Approx(std::pow(kPi * kPi * k * k, s) * f.coeff(k)).epsilon(1e-13));
        SpectralField back = solve_power(forward, s);
        for (int k = 1; k <= 12; ++k)
            CHECK(back.coeff(k) == doctest::Approx(f.coeff(k)).epsilon(1e-13));
    }
}

TEST_CASE("half-order single-mode flux recovers sqrt(lambda) sharply") {
    // at s = 1/2 the extension of a mode is exp(-sqrt(lambda) y): the discrete
    // Neumann value must approach sqrt(lambda) itself
    double got = mode_dtn_1d(kPi * kPi, 0.5, 256, 4.0, 8.0);
    CHECK(got == doctest::Approx(kPi).epsilon(2e-3));
}

TEST_CASE("single-mode flux approximates lambda^s across orders") {
    for (double s : {0.25, 0.5, 0.75}) {
        double lambda = kPi * kPi;
        double got = mode_dtn_1d(lambda, s, 256, 6.0, 8.0);
        CHECK(got == doctest::Approx(std::pow(lambda, s)).epsilon(1e-2));
    }
}

TEST_CASE("single-mode flux improves under y-refinement") {
    const double lambda = kPi * kPi, s = 0.3;
    const double exact = std::pow(lambda, s);
    double coarse = std::abs(mode_dtn_1d(lambda, s, 64, 6.0, 8.0) - exact);
    double fine = std::abs(mode_dtn_1d(lambda, s, 512, 6.0, 8.0) - exact);
    CHECK(fine < coarse);
}

TEST_SUITE_END();
