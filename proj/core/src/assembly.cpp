#include "varfrac/assembly.hpp"

#include "varfrac/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace varfrac {

double y_weight_moments(double s, double a, double b, int k) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("y_weight_moments: s in (0,1)");
    if (!(0.0 <= a && a < b)) throw std::invalid_argument("y_weight_moments: need 0 <= a < b");
    if (k < 0) throw std::invalid_argument("y_weight_moments: k >= 0");
    const double e = (1.0 - 2.0 * s) + k + 1.0; // > 0 for every k >= 0
    return (std::pow(b, e) - std::pow(a, e)) / e;
}

void parallel_chunks(int n, int threads, const std::function<void(int, int, int)>& fn) {
    if (threads < 1) threads = 1;
    if (threads == 1 || n < 2 * threads) {
        fn(0, 0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int lo = t * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, t, lo, hi] { fn(t, lo, hi); });
    }
    for (auto& th : pool) th.join();
}

namespace {

// 2x2 one-dimensional hat-function blocks
struct Blocks1D {
    double K[2][2];
    double M[2][2];
};

Blocks1D x_blocks(double h) {
    Blocks1D b;
    b.K[0][0] = b.K[1][1] = 1.0 / h;
    b.K[0][1] = b.K[1][0] = -1.0 / h;
    b.M[0][0] = b.M[1][1] = h / 3.0;
    b.M[0][1] = b.M[1][0] = h / 6.0;
    return b;
}

Blocks1D y_blocks(double s, double a, double b) {
    const double h = b - a;
    const double m0 = y_weight_moments(s, a, b, 0);
    const double m1 = y_weight_moments(s, a, b, 1);
    const double m2 = y_weight_moments(s, a, b, 2);
    Blocks1D out;
    const double h2 = h * h;
    out.K[0][0] = out.K[1][1] = m0 / h2;
    out.K[0][1] = out.K[1][0] = -m0 / h2;
    out.M[0][0] = (b * b * m0 - 2.0 * b * m1 + m2) / h2;
    out.M[0][1] = out.M[1][0] = (-a * b * m0 + (a + b) * m1 - m2) / h2;
    out.M[1][1] = (a * a * m0 - 2.0 * a * m1 + m2) / h2;
    return out;
}

struct LocalMats {
    int n = 4;
    double A[8][8];
    double M[8][8];
};

// Tensor-product local matrices with s and G frozen at the x-cell midpoint.
LocalMats element_matrices(const CylinderMesh& mesh, const WeightSpec& spec, int e) {
    int i1, i2, j;
    mesh.element_cell(e, i1, i2, j);
    const auto& xs = mesh.x_coords();
    const auto& ys = mesh.y_coords();
    const int dim = mesh.dim();
    Point mid{0.5 * (xs[i1] + xs[i1 + 1]), 0.0};
    if (dim == 2) mid[1] = 0.5 * (xs[i2] + xs[i2 + 1]);
    const double s = spec.eval_order(mid);
    const double G = spec.eval_G(mid);

    const Blocks1D bx = x_blocks(xs[i1 + 1] - xs[i1]);
    const Blocks1D by = y_blocks(s, ys[j], ys[j + 1]);

    LocalMats loc;
    loc.n = dim == 1 ? 4 : 8;
    if (dim == 1) {
        for (int ay = 0; ay < 2; ++ay)
            for (int a1 = 0; a1 < 2; ++a1)
                for (int by_ = 0; by_ < 2; ++by_)
                    for (int b1 = 0; b1 < 2; ++b1) {
                        const int la = ay * 2 + a1, lb = by_ * 2 + b1;
                        loc.A[la][lb] = G * (bx.K[a1][b1] * by.M[ay][by_] +
                                             bx.M[a1][b1] * by.K[ay][by_]);
                        loc.M[la][lb] = G * bx.M[a1][b1] * by.M[ay][by_];
                    }
        return loc;
    }
    for (int ay = 0; ay < 2; ++ay)
        for (int a2 = 0; a2 < 2; ++a2)
            for (int a1 = 0; a1 < 2; ++a1)
                for (int cy = 0; cy < 2; ++cy)
                    for (int b2 = 0; b2 < 2; ++b2)
                        for (int b1 = 0; b1 < 2; ++b1) {
                            const int la = ay * 4 + a2 * 2 + a1;
                            const int lb = cy * 4 + b2 * 2 + b1;
                            const double grad_x =
                                bx.K[a1][b1] * bx.M[a2][b2] * by.M[ay][cy] +
                                bx.M[a1][b1] * bx.K[a2][b2] * by.M[ay][cy];
                            const double grad_y =
                                bx.M[a1][b1] * bx.M[a2][b2] * by.K[ay][cy];
                            loc.A[la][lb] = G * (grad_x + grad_y);
                            loc.M[la][lb] = G * bx.M[a1][b1] * bx.M[a2][b2] * by.M[ay][cy];
                        }
    return loc;
}

std::vector<Triplet> gather_element_triplets(const CylinderMesh& mesh, const WeightSpec& spec,
                                             int threads, bool with_mass,
                                             std::vector<Triplet>* mass_out,
                                             const std::vector<int>& index_map) {
    const int ne = mesh.num_elements();
    std::vector<std::vector<Triplet>> a_parts;
    std::vector<std::vector<Triplet>> m_parts;
    const int nchunks = threads < 1 ? 1 : threads;
    a_parts.resize(nchunks);
    m_parts.resize(nchunks);
    parallel_chunks(ne, threads, [&](int chunk, int lo, int hi) {
        auto& av = a_parts[chunk];
        auto& mv = m_parts[chunk];
        int nodes[8];
        for (int e = lo; e < hi; ++e) {
            const LocalMats loc = element_matrices(mesh, spec, e);
            mesh.element_nodes(e, nodes);
            for (int a = 0; a < loc.n; ++a) {
                const int ra = index_map[nodes[a]];
                if (ra < 0) continue;
                for (int b = 0; b < loc.n; ++b) {
                    const int cb = index_map[nodes[b]];
                    if (cb < 0) continue;
                    av.push_back({ra, cb, loc.A[a][b]});
                    if (with_mass) mv.push_back({ra, cb, loc.M[a][b]});
                }
            }
        }
    });
    std::vector<Triplet> a_all;
    std::vector<Triplet> m_all;
    for (int c = 0; c < nchunks; ++c) {
        a_all.insert(a_all.end(), a_parts[c].begin(), a_parts[c].end());
        if (with_mass) m_all.insert(m_all.end(), m_parts[c].begin(), m_parts[c].end());
    }
    if (with_mass && mass_out) *mass_out = std::move(m_all);
    return a_all;
}

// base-cell mass blocks over interior base nodes; `weight` is evaluated at
// the cell midpoint (1.0 for the plain base mass)
std::vector<Triplet> base_mass_triplets(const CylinderMesh& mesh,
                                        const std::vector<int>& base_index,
                                        const std::function<double(const Point&)>& weight) {
    const int nx = mesh.n_x();
    const auto& xs = mesh.x_coords();
    const int dim = mesh.dim();
    std::vector<Triplet> out;
    if (dim == 1) {
        for (int i = 0; i < nx - 1; ++i) {
            const Blocks1D bx = x_blocks(xs[i + 1] - xs[i]);
            const double w = weight(Point{0.5 * (xs[i] + xs[i + 1]), 0.0});
            const int ga[2] = {i, i + 1};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const int ra = base_index[mesh.node_id(ga[a], 0, 0)];
                    const int cb = base_index[mesh.node_id(ga[b], 0, 0)];
                    if (ra >= 0 && cb >= 0) out.push_back({ra, cb, w * bx.M[a][b]});
                }
        }
        return out;
    }
    for (int i2 = 0; i2 < nx - 1; ++i2) {
        for (int i1 = 0; i1 < nx - 1; ++i1) {
            const Blocks1D b1 = x_blocks(xs[i1 + 1] - xs[i1]);
            const Blocks1D b2 = x_blocks(xs[i2 + 1] - xs[i2]);
            const Point mid{0.5 * (xs[i1] + xs[i1 + 1]), 0.5 * (xs[i2] + xs[i2 + 1])};
            const double w = weight(mid);
            for (int a2 = 0; a2 < 2; ++a2)
                for (int a1 = 0; a1 < 2; ++a1)
                    for (int c2 = 0; c2 < 2; ++c2)
                        for (int c1 = 0; c1 < 2; ++c1) {
                            const int ra = base_index[mesh.node_id(i1 + a1, i2 + a2, 0)];
                            const int cb = base_index[mesh.node_id(i1 + c1, i2 + c2, 0)];
                            if (ra >= 0 && cb >= 0)
                                out.push_back({ra, cb, w * b1.M[a1][c1] * b2.M[a2][c2]});
                        }
        }
    }
    return out;
}

} // namespace

std::vector<double> ExtensionSystem::to_full(const std::vector<double>& free_vec) const {
    std::vector<double> full(mesh.num_nodes(), 0.0);
    for (std::size_t i = 0; i < free_nodes.size(); ++i) full[free_nodes[i]] = free_vec[i];
    return full;
}

std::vector<double> ExtensionSystem::restrict_to_base(const std::vector<double>& free_vec) const {
    std::vector<double> v(base_nodes.size(), 0.0);
    for (std::size_t b = 0; b < base_nodes.size(); ++b) v[b] = free_vec[base_to_free[b]];
    return v;
}

ExtensionSystem assemble(const CylinderMesh& mesh, const WeightSpec& spec, int threads) {
    if (mesh.dim() != spec.order().dim())
        throw std::invalid_argument("assemble: mesh and order dimension mismatch");
    ExtensionSystem sys{mesh, spec, {}, {}, {}, {}, {}, {}, {}, {}, {}};

    const int nn = mesh.num_nodes();
    sys.free_index.assign(nn, -1);
    sys.base_index.assign(nn, -1);
    for (int v = 0; v < nn; ++v) {
        if (!mesh.is_dirichlet(v)) {
            sys.free_index[v] = static_cast<int>(sys.free_nodes.size());
            sys.free_nodes.push_back(v);
            if (mesh.classify(v) == NodeSet::Base) {
                sys.base_index[v] = static_cast<int>(sys.base_nodes.size());
                sys.base_nodes.push_back(v);
            }
        }
    }
    sys.base_to_free.resize(sys.base_nodes.size());
    for (std::size_t b = 0; b < sys.base_nodes.size(); ++b)
        sys.base_to_free[b] = sys.free_index[sys.base_nodes[b]];

    std::vector<Triplet> mass;
    std::vector<Triplet> stiff =
        gather_element_triplets(mesh, spec, threads, true, &mass, sys.free_index);
    const int nf = sys.n_free();
    sys.A = SparseMatrix::from_triplets(nf, nf, std::move(stiff));
    sys.M_w = SparseMatrix::from_triplets(nf, nf, std::move(mass));

    const int nb = sys.n_base();
    sys.M_base = SparseMatrix::from_triplets(
        nb, nb, base_mass_triplets(mesh, sys.base_index, [](const Point&) { return 1.0; }));
    sys.M_base_tilde = SparseMatrix::from_triplets(
        nb, nb, base_mass_triplets(mesh, sys.base_index, [&spec](const Point& x) {
            return spec.eval_trace_weight(x);
        }));
    return sys;
}

SparseMatrix assemble_full_stiffness(const CylinderMesh& mesh, const WeightSpec& spec,
                                     int threads) {
    const int nn = mesh.num_nodes();
    std::vector<int> identity(nn);
    for (int i = 0; i < nn; ++i) identity[i] = i;
    std::vector<Triplet> stiff =
        gather_element_triplets(mesh, spec, threads, false, nullptr, identity);
    return SparseMatrix::from_triplets(nn, nn, std::move(stiff));
}

std::vector<double> load_from_base_function(const ExtensionSystem& sys,
                                            const std::function<double(const Point&)>& h) {
    const CylinderMesh& mesh = sys.mesh;
    const int nx = mesh.n_x();
    const auto& xs = mesh.x_coords();
    std::vector<double> b(sys.n_free(), 0.0);
    const GaussRule& rule = gauss_legendre(3);
    if (mesh.dim() == 1) {
        for (int i = 0; i < nx - 1; ++i) {
            const double lo = xs[i], hi = xs[i + 1], hw = 0.5 * (hi - lo);
            for (int q = 0; q < 3; ++q) {
                const double xq = 0.5 * (lo + hi) + hw * rule.nodes[q];
                const double wq = hw * rule.weights[q];
                const double hv = h(Point{xq, 0.0});
                const double l1 = (hi - xq) / (hi - lo);
                const double vals[2] = {l1, 1.0 - l1};
                const int ids[2] = {mesh.node_id(i, 0, 0), mesh.node_id(i + 1, 0, 0)};
                for (int a = 0; a < 2; ++a) {
                    const int f = sys.free_index[ids[a]];
                    if (f >= 0) b[f] += wq * hv * vals[a];
                }
            }
        }
        return b;
    }
    for (int i2 = 0; i2 < nx - 1; ++i2) {
        for (int i1 = 0; i1 < nx - 1; ++i1) {
            const double lo1 = xs[i1], hi1 = xs[i1 + 1], hw1 = 0.5 * (hi1 - lo1);
            const double lo2 = xs[i2], hi2 = xs[i2 + 1], hw2 = 0.5 * (hi2 - lo2);
            for (int q2 = 0; q2 < 3; ++q2)
                for (int q1 = 0; q1 < 3; ++q1) {
                    const double x1 = 0.5 * (lo1 + hi1) + hw1 * rule.nodes[q1];
                    const double x2 = 0.5 * (lo2 + hi2) + hw2 * rule.nodes[q2];
                    const double wq = hw1 * rule.weights[q1] * hw2 * rule.weights[q2];
                    const double hv = h(Point{x1, x2});
                    const double a1 = (hi1 - x1) / (hi1 - lo1);
                    const double a2 = (hi2 - x2) / (hi2 - lo2);
                    const double v1[2] = {a1, 1.0 - a1};
                    const double v2[2] = {a2, 1.0 - a2};
                    for (int d2 = 0; d2 < 2; ++d2)
                        for (int d1 = 0; d1 < 2; ++d1) {
                            const int f =
                                sys.free_index[mesh.node_id(i1 + d1, i2 + d2, 0)];
                            if (f >= 0) b[f] += wq * hv * v1[d1] * v2[d2];
                        }
                }
        }
    }
    return b;
}

} // namespace varfrac
