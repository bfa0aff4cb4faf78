#include "varfrac/spectral_oracle.hpp"

#include "varfrac/assembly.hpp"
#include "varfrac/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace varfrac {

namespace {

void check_field(const SpectralField& f) {
    if (f.dim != 1 && f.dim != 2)
        throw std::invalid_argument("SpectralField: dim must be 1 or 2");
    const std::size_t want = f.dim == 1 ? f.modes : f.modes * static_cast<std::size_t>(f.modes);
    if (f.coeffs.size() != want)
        throw std::invalid_argument("SpectralField: coefficient count mismatch");
}

} // namespace

double SpectralField::coeff(int k1, int k2) const {
    if (dim == 1) return coeffs[k1 - 1];
    return coeffs[(k1 - 1) + static_cast<std::size_t>(modes) * (k2 - 1)];
}

double SpectralField::eigenvalue(int k1, int k2) const {
    double kk = static_cast<double>(k1) * k1;
    if (dim == 2) kk += static_cast<double>(k2) * k2;
    return M_PI * M_PI * kk;
}

double SpectralField::evaluate(const Point& x) const {
    const double norm = std::pow(2.0, 0.5 * dim);
    double acc = 0.0;
    if (dim == 1) {
        for (int k = 1; k <= modes; ++k)
            acc += coeffs[k - 1] * norm * std::sin(k * M_PI * x[0]);
        return acc;
    }
    for (int k2 = 1; k2 <= modes; ++k2) {
        const double s2 = std::sin(k2 * M_PI * x[1]);
        for (int k1 = 1; k1 <= modes; ++k1)
            acc += coeff(k1, k2) * norm * std::sin(k1 * M_PI * x[0]) * s2;
    }
    return acc;
}

double SpectralField::energy() const {
    double acc = 0.0;
    for (double c : coeffs) acc += c * c;
    return acc;
}

double SpectralField::tail_shell_energy() const {
    if (modes == 0) return 0.0;
    if (dim == 1) {
        const double c = coeffs[modes - 1];
        return c * c;
    }
    double acc = 0.0;
    for (int k = 1; k <= modes; ++k) {
        const double a = coeff(modes, k);
        acc += a * a;
        if (k < modes) {
            const double b = coeff(k, modes);
            acc += b * b;
        }
    }
    return acc;
}

SpectralField analyze(const std::function<double(const Point&)>& f, int dim, int modes,
                      int quad_pts) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("analyze: dim must be 1 or 2");
    if (modes < 1) throw std::invalid_argument("analyze: need at least one mode");
    if (quad_pts < 2) throw std::invalid_argument("analyze: need at least two points");
    const GaussRule& rule = gauss_legendre(quad_pts);
    SpectralField field;
    field.dim = dim;
    field.modes = modes;
    const double norm = std::pow(2.0, 0.5 * dim);
    if (dim == 1) {
        field.coeffs.assign(modes, 0.0);
        for (int q = 0; q < quad_pts; ++q) {
            const double x = 0.5 + 0.5 * rule.nodes[q];
            const double w = 0.5 * rule.weights[q];
            const double fv = f(Point{x, 0.0});
            for (int k = 1; k <= modes; ++k)
                field.coeffs[k - 1] += w * fv * norm * std::sin(k * M_PI * x);
        }
        return field;
    }
    field.coeffs.assign(static_cast<std::size_t>(modes) * modes, 0.0);
    for (int q2 = 0; q2 < quad_pts; ++q2) {
        const double x2 = 0.5 + 0.5 * rule.nodes[q2];
        const double w2 = 0.5 * rule.weights[q2];
        for (int q1 = 0; q1 < quad_pts; ++q1) {
            const double x1 = 0.5 + 0.5 * rule.nodes[q1];
            const double w = w2 * 0.5 * rule.weights[q1];
            const double fv = f(Point{x1, x2});
            for (int k2 = 1; k2 <= modes; ++k2) {
                const double s2 = std::sin(k2 * M_PI * x2);
                for (int k1 = 1; k1 <= modes; ++k1)
                    field.coeffs[(k1 - 1) + static_cast<std::size_t>(modes) * (k2 - 1)] +=
                        w * fv * norm * std::sin(k1 * M_PI * x1) * s2;
            }
        }
    }
    return field;
}

SpectralField apply_power(const SpectralField& field, double s) {
    check_field(field);
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("apply_power: s in (0,1]");
    SpectralField out = field;
    if (field.dim == 1) {
        for (int k = 1; k <= field.modes; ++k)
            out.coeffs[k - 1] *= std::pow(field.eigenvalue(k), s);
        return out;
    }
    for (int k2 = 1; k2 <= field.modes; ++k2)
        for (int k1 = 1; k1 <= field.modes; ++k1)
            out.coeffs[(k1 - 1) + static_cast<std::size_t>(field.modes) * (k2 - 1)] *=
                std::pow(field.eigenvalue(k1, k2), s);
    return out;
}

SpectralField solve_power(const SpectralField& rhs, double s) {
    check_field(rhs);
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("solve_power: s in (0,1]");
    SpectralField out = rhs;
    if (rhs.dim == 1) {
        for (int k = 1; k <= rhs.modes; ++k)
            out.coeffs[k - 1] *= std::pow(rhs.eigenvalue(k), -s);
        return out;
    }
    for (int k2 = 1; k2 <= rhs.modes; ++k2)
        for (int k1 = 1; k1 <= rhs.modes; ++k1)
            out.coeffs[(k1 - 1) + static_cast<std::size_t>(rhs.modes) * (k2 - 1)] *=
                std::pow(rhs.eigenvalue(k1, k2), -s);
    return out;
}

double mode_dtn_1d(double lambda, double s, int n_y, double gamma, double tau) {
    if (!(lambda > 0.0)) throw std::invalid_argument("mode_dtn_1d: lambda must be positive");
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("mode_dtn_1d: s in (0,1)");
    if (n_y < 3) throw std::invalid_argument("mode_dtn_1d: need n_y >= 3");
    if (!(gamma >= 1.0) || !(tau > 0.0))
        throw std::invalid_argument("mode_dtn_1d: invalid grid parameters");

    std::vector<double> y(n_y);
    for (int j = 0; j < n_y; ++j)
        y[j] = tau * std::pow(static_cast<double>(j) / (n_y - 1), gamma);

    // tridiagonal K + lambda*M over all nodes (weight y^{1-2s}, hat elements)
    const int n = n_y;
    std::vector<double> diag(n, 0.0), off(n - 1, 0.0);
    std::vector<double> k00(n - 1), m00(n - 1), m01(n - 1), m11(n - 1);
    for (int j = 0; j < n - 1; ++j) {
        const double a = y[j], b = y[j + 1], h = b - a;
        if (!(h > 0.0)) throw std::invalid_argument("mode_dtn_1d: degenerate grid cell");
        const double q0 = y_weight_moments(s, a, b, 0);
        const double q1 = y_weight_moments(s, a, b, 1);
        const double q2 = y_weight_moments(s, a, b, 2);
        const double h2 = h * h;
        k00[j] = q0 / h2;
        m00[j] = (b * b * q0 - 2.0 * b * q1 + q2) / h2;
        m01[j] = (-a * b * q0 + (a + b) * q1 - q2) / h2;
        m11[j] = (a * a * q0 - 2.0 * a * q1 + q2) / h2;
        diag[j] += k00[j] + lambda * m00[j];
        diag[j + 1] += k00[j] + lambda * m11[j];
        off[j] += -k00[j] + lambda * m01[j];
    }

    // Thomas solve on interior nodes 1..n-2 with g_0 = 1, g_{n-1} = 0
    const int ni = n - 2;
    std::vector<double> c(ni), d(ni);
    {
        std::vector<double> sub(ni, 0.0), main(ni, 0.0), sup(ni, 0.0), rhs(ni, 0.0);
        for (int i = 0; i < ni; ++i) {
            main[i] = diag[i + 1];
            if (i > 0) sub[i] = off[i];
            if (i < ni - 1) sup[i] = off[i + 1];
        }
        rhs[0] = -off[0];
        double piv = main[0];
        if (piv == 0.0) throw std::invalid_argument("mode_dtn_1d: singular tridiagonal pivot");
        c[0] = sup[0] / piv;
        d[0] = rhs[0] / piv;
        for (int i = 1; i < ni; ++i) {
            piv = main[i] - sub[i] * c[i - 1];
            if (piv == 0.0)
                throw std::invalid_argument("mode_dtn_1d: singular tridiagonal pivot");
            c[i] = sup[i] / piv;
            d[i] = (rhs[i] - sub[i] * d[i - 1]) / piv;
        }
        for (int i = ni - 2; i >= 0; --i) d[i] -= c[i] * d[i + 1];
    }
    std::vector<double> g(n, 0.0);
    g[0] = 1.0;
    for (int i = 0; i < ni; ++i) g[i + 1] = d[i];
    g[n - 1] = 0.0;

    // flux via the energy identity: every term is nonnegative, so the value
    // survives gradings where the first-cell stiffness dwarfs the flux
    double flux = 0.0;
    for (int j = 0; j < n - 1; ++j) {
        const double gj = g[j], gk = g[j + 1];
        const double dg = gj - gk;
        flux += k00[j] * dg * dg +
                lambda * (m00[j] * gj * gj + 2.0 * m01[j] * gj * gk + m11[j] * gk * gk);
    }
    return gs_constant(s) * flux;
}

} // namespace varfrac
