#include "varfrac/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace varfrac {

namespace {

GaussRule compute_rule(int n) {
    // Newton iteration on P_n; nodes seeded by the Chebyshev-like estimate.
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // three-term recurrence for P_n(x) and P_{n-1}(x)
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

} // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int q = 0; q < n; ++q) sum += rule.weights[q] * f(mid + half * rule.nodes[q]);
    return half * sum;
}

double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int cells, int n) {
    double sum = 0.0;
    const double h = (b - a) / cells;
    for (int c = 0; c < cells; ++c) sum += integrate(f, a + c * h, a + (c + 1) * h, n);
    return sum;
}

GradedResult integrate_graded(const std::function<double(double)>& f, double a, double b,
                              bool singular_at_a, const GradedOptions& opts) {
    GradedResult res;
    if (!(b > a)) return {0.0, true, false, 0};
    const double len = b - a;
    double partial = 0.0;
    double shell_prev = 0.0;
    bool have_shell_prev = false;
    double completed_prev = 0.0;
    bool have_completed_prev = false;
    int nondecaying = 0;
    double scale = 1.0;
    for (int k = 0; k < opts.max_levels; ++k) {
        const double outer = len * scale;
        const double inner = 0.5 * outer;
        double lo, hi;
        if (singular_at_a) {
            lo = a + inner;
            hi = a + outer;
        } else {
            lo = b - outer;
            hi = b - inner;
        }
        if (!(hi > lo) || inner == 0.0) {
            // The shell width has collapsed below the resolution of double near the
            // singular endpoint; the unresolved remainder is below representable size.
            if (have_completed_prev) {
                res.converged = true;
                res.value = completed_prev;
            } else {
                res.suspected_divergent = true;
                res.value = partial;
            }
            return res;
        }
        const double shell = integrate(f, lo, hi, opts.points_per_level);
        if (!std::isfinite(shell)) {
            // A quadrature node rounded onto the singularity itself. Shells this deep
            // carry no representable mass; report the best completed estimate if the
            // shells were decaying, otherwise give up without poisoning the sum.
            if (have_completed_prev) {
                res.converged = true;
                res.value = completed_prev;
            } else {
                res.suspected_divergent = true;
                res.value = partial;
            }
            return res;
        }
        partial += shell;
        res.levels_used = k + 1;

        // A power-law integrand t^{-q} has exactly geometric shell integrals
        // with ratio 2^{q-1}: decaying iff integrable. The measured ratio
        // drives both the divergence test (persistently non-decaying shells)
        // and the tail completion shell * r / (1 - r), which is exact for a
        // pure power and second-order accurate otherwise. Convergence is
        // declared when two successive completed values agree.
        if (have_shell_prev) {
            const double mag = std::abs(shell);
            const double mag_prev = std::abs(shell_prev);
            if (mag > 0.0 && mag_prev == 0.0) {
                // mass reappeared after an empty shell: ratios mean nothing
                // here, restart the assessment
                nondecaying = 0;
                have_completed_prev = false;
            } else {
                const double r = (mag_prev > 0.0) ? mag / mag_prev : 0.0;
                if (r >= opts.divergence_ratio) {
                    if (++nondecaying >= 4) {
                        res.suspected_divergent = true;
                        res.value = partial;
                        return res;
                    }
                } else {
                    nondecaying = 0;
                }
                if (r < 1.0) {
                    const double completed =
                        partial + (r > 0.0 ? shell * r / (1.0 - r) : 0.0);
                    if (have_completed_prev &&
                        std::abs(completed - completed_prev) <=
                            opts.rel_tol * std::max(std::abs(completed), 1e-300)) {
                        res.converged = true;
                        res.value = completed;
                        return res;
                    }
                    completed_prev = completed;
                    have_completed_prev = true;
                } else {
                    have_completed_prev = false;
                }
            }
        }
        shell_prev = shell;
        have_shell_prev = true;

        scale = inner / len;
    }
    res.suspected_divergent = true; // budget exhausted without agreement
    res.value = partial;
    return res;
}

} // namespace varfrac
