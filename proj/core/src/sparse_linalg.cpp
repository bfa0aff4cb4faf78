#include "varfrac/sparse_linalg.hpp"

#include <algorithm>
#include <cmath>

namespace varfrac {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> t) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("SparseMatrix: negative shape");
    for (const auto& e : t) {
        if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
            throw std::invalid_argument("SparseMatrix: triplet index out of range");
        if (!std::isfinite(e.value))
            throw std::invalid_argument("SparseMatrix: non-finite triplet value");
    }
    // stable sort keeps duplicate summation order independent of producer
    // interleaving, which keeps assembly bit-reproducible across thread counts
    std::stable_sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(rows + 1, 0);
    std::size_t i = 0;
    while (i < t.size()) {
        const int r = t[i].row, c = t[i].col;
        double v = 0.0;
        while (i < t.size() && t[i].row == r && t[i].col == c) v += t[i++].value;
        m.col_.push_back(c);
        m.val_.push_back(v);
        ++m.row_ptr_[r + 1];
    }
    for (int r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    return m;
}

void SparseMatrix::multiply(const double* x, double* y) const {
    for (int r = 0; r < rows_; ++r) {
        double acc = 0.0;
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += val_[k] * x[col_[k]];
        y[r] = acc;
    }
}

std::vector<double> SparseMatrix::apply(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != cols_)
        throw std::invalid_argument("SparseMatrix::apply: size mismatch");
    std::vector<double> y(rows_);
    multiply(x.data(), y.data());
    return y;
}

double SparseMatrix::bilinear(const std::vector<double>& x,
                              const std::vector<double>& y) const {
    double acc = 0.0;
    for (int r = 0; r < rows_; ++r) {
        double row = 0.0;
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) row += val_[k] * y[col_[k]];
        acc += x[r] * row;
    }
    return acc;
}

std::vector<double> SparseMatrix::diagonal() const {
    std::vector<double> d(rows_, 0.0);
    for (int r = 0; r < rows_; ++r)
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            if (col_[k] == r) d[r] += val_[k];
    return d;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

namespace {

/// Incomplete Cholesky factor on the lower-triangular pattern of A, plus its
/// transpose for the backward sweep. ok=false means factorization broke down
/// at every attempted diagonal lift and the caller should fall back to
/// diagonal scaling.
struct IcFactor {
    int n = 0;
    bool ok = false;
    std::vector<int> lp, lcol;
    std::vector<double> lval; // L, row-wise, columns ascending, diagonal last
    std::vector<int> up, ucol;
    std::vector<double> uval; // L^T, row-wise, columns ascending, diagonal first
};

/// One factorization attempt with the diagonal scaled by (1 + lift).
bool ic0_attempt(const SparseMatrix& A, double lift, IcFactor& f) {
    const int n = A.rows();
    const std::vector<int>& ap = A.row_ptr();
    const std::vector<int>& acol = A.col_idx();
    const std::vector<double>& aval = A.values();

    f.lp.assign(n + 1, 0);
    f.lcol.clear();
    f.lval.clear();
    for (int i = 0; i < n; ++i) {
        for (int k = ap[i]; k < ap[i + 1]; ++k) {
            if (acol[k] > i) break; // columns are sorted ascending
            f.lcol.push_back(acol[k]);
            f.lval.push_back(acol[k] == i ? aval[k] * (1.0 + lift) : aval[k]);
        }
        f.lp[i + 1] = static_cast<int>(f.lcol.size());
        // the diagonal must be structurally present and close the row
        if (f.lp[i + 1] == f.lp[i] || f.lcol.back() != i) return false;
    }

    std::vector<int> diag_at(n);
    for (int i = 0; i < n; ++i) {
        const int row_begin = f.lp[i];
        const int row_diag = f.lp[i + 1] - 1;
        diag_at[i] = row_diag;
        for (int idx = row_begin; idx < row_diag; ++idx) {
            const int k = f.lcol[idx];
            // dot of rows i and k over columns < k (two-pointer merge)
            double s = 0.0;
            int a = row_begin, bptr = f.lp[k];
            const int a_end = idx, b_end = diag_at[k];
            while (a < a_end && bptr < b_end) {
                const int ca = f.lcol[a], cb = f.lcol[bptr];
                if (ca == cb) {
                    s += f.lval[a++] * f.lval[bptr++];
                } else if (ca < cb) {
                    ++a;
                } else {
                    ++bptr;
                }
            }
            f.lval[idx] = (f.lval[idx] - s) / f.lval[diag_at[k]];
        }
        double s = 0.0;
        for (int idx = row_begin; idx < row_diag; ++idx) s += f.lval[idx] * f.lval[idx];
        const double d = f.lval[row_diag] - s;
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        f.lval[row_diag] = std::sqrt(d);
    }

    // transpose (counting sort); within a transposed row the source rows
    // arrive in ascending order, so columns stay sorted
    f.up.assign(n + 1, 0);
    const int nnz = static_cast<int>(f.lcol.size());
    f.ucol.assign(nnz, 0);
    f.uval.assign(nnz, 0.0);
    for (int k = 0; k < nnz; ++k) ++f.up[f.lcol[k] + 1];
    for (int j = 0; j < n; ++j) f.up[j + 1] += f.up[j];
    std::vector<int> next(f.up.begin(), f.up.end() - 1);
    for (int i = 0; i < n; ++i) {
        for (int k = f.lp[i]; k < f.lp[i + 1]; ++k) {
            const int j = f.lcol[k];
            f.ucol[next[j]] = i;
            f.uval[next[j]] = f.lval[k];
            ++next[j];
        }
    }
    return true;
}

IcFactor build_ic0(const SparseMatrix& A) {
    IcFactor f;
    f.n = A.rows();
    for (double lift : {0.0, 1e-3, 1e-2, 1e-1, 1.0}) {
        if (ic0_attempt(A, lift, f)) {
            f.ok = true;
            return f;
        }
    }
    f.ok = false;
    return f;
}

/// z = (L L^T)^{-1} r: forward sweep through L, backward sweep through L^T.
void ic_apply(const IcFactor& f, const std::vector<double>& r, std::vector<double>& z) {
    const int n = f.n;
    for (int i = 0; i < n; ++i) {
        double acc = r[i];
        const int row_diag = f.lp[i + 1] - 1;
        for (int k = f.lp[i]; k < row_diag; ++k) acc -= f.lval[k] * z[f.lcol[k]];
        z[i] = acc / f.lval[row_diag];
    }
    for (int i = n - 1; i >= 0; --i) {
        double acc = z[i];
        const int row_diag = f.up[i]; // diagonal leads the transposed row
        for (int k = row_diag + 1; k < f.up[i + 1]; ++k) acc -= f.uval[k] * z[f.ucol[k]];
        z[i] = acc / f.uval[row_diag];
    }
}

} // namespace

CgResult cg_solve(const SparseMatrix& A, const std::vector<double>& b, const CgOptions& opts) {
    const int n = A.rows();
    if (A.cols() != n) throw std::invalid_argument("cg_solve: matrix must be square");
    if (static_cast<int>(b.size()) != n) throw std::invalid_argument("cg_solve: rhs size");
    CgResult res;
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        res.x.assign(n, 0.0);
        return res;
    }
    const int max_iter = opts.max_iter > 0 ? opts.max_iter : 2 * n + 1000;
    std::vector<double> x(n, 0.0);
    if (opts.x0) {
        if (static_cast<int>(opts.x0->size()) != n)
            throw std::invalid_argument("cg_solve: warm-start size");
        x = *opts.x0;
    }
    std::vector<double> inv_diag = A.diagonal();
    for (double& d : inv_diag) {
        if (d <= 0.0) throw std::invalid_argument("cg_solve: non-SPD diagonal");
        d = 1.0 / d;
    }
    // graded meshes put many orders of magnitude between element sizes, which
    // plain diagonal scaling cannot absorb; incomplete Cholesky can
    const IcFactor ic = build_ic0(A);
    auto precondition = [&](const std::vector<double>& rv, std::vector<double>& zv) {
        if (ic.ok) {
            ic_apply(ic, rv, zv);
        } else {
            for (int i = 0; i < n; ++i) zv[i] = inv_diag[i] * rv[i];
        }
    };
    std::vector<double> r(n), z(n), p(n), Ap(n);
    A.multiply(x.data(), Ap.data());
    for (int i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
    double rnorm = norm2(r);
    if (rnorm <= opts.tol * bnorm) {
        res.x = std::move(x);
        res.residual = rnorm / bnorm;
        return res;
    }
    precondition(r, z);
    p = z;
    double rz = dot(r, z);
    for (int it = 1; it <= max_iter; ++it) {
        A.multiply(p.data(), Ap.data());
        const double pAp = dot(p, Ap);
        if (pAp <= 0.0) throw NonConvergence("cg_solve: matrix not positive definite", it,
                                             rnorm / bnorm);
        const double alpha = rz / pAp;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        rnorm = norm2(r);
        if (rnorm <= opts.tol * bnorm) {
            res.x = std::move(x);
            res.iterations = it;
            res.residual = rnorm / bnorm;
            return res;
        }
        precondition(r, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw NonConvergence("cg_solve: iteration budget exhausted", max_iter, rnorm / bnorm);
}

EigResult smallest_generalized_eig(const SparseMatrix& A, const SparseMatrix& B,
                                   const EigOptions& opts) {
    const int n = A.rows();
    if (A.cols() != n || B.rows() != n || B.cols() != n)
        throw std::invalid_argument("smallest_generalized_eig: shape mismatch");
    // deterministic start vector: xorshift64*
    std::vector<double> v(n);
    std::uint64_t state = opts.seed ? opts.seed : 1ull;
    for (int i = 0; i < n; ++i) {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        const std::uint64_t r = state * 0x2545f4914f6cdd1dull;
        v[i] = (static_cast<double>(r >> 11) / 9007199254740992.0) - 0.5;
    }
    std::vector<double> Bv = B.apply(v);
    double bnorm = std::sqrt(dot(v, Bv));
    if (bnorm <= 0.0) throw std::invalid_argument("smallest_generalized_eig: B degenerate");
    for (int i = 0; i < n; ++i) v[i] /= bnorm;

    double nu_prev = 0.0;
    std::vector<double> v_prev;
    CgResult inner;
    inner.x.assign(n, 0.0);
    for (int it = 1; it <= opts.max_iter; ++it) {
        Bv = B.apply(v);
        CgOptions copts;
        copts.tol = opts.cg_tol;
        copts.x0 = &inner.x; // warm start from the previous inverse iterate
        inner = cg_solve(A, Bv, copts);
        std::vector<double>& w = inner.x;
        std::vector<double> Bw = B.apply(w);
        const double wBw = dot(w, Bw);
        if (wBw <= 0.0)
            throw NonConvergence("smallest_generalized_eig: lost B-positivity", it, 0.0);
        const double scale = 1.0 / std::sqrt(wBw);
        std::vector<double> Aw = A.apply(w);
        const double nu = dot(w, Aw) / wBw;
        std::vector<double> v_next = w;
        for (int i = 0; i < n; ++i) v_next[i] *= scale;
        if (it > 1 && std::abs(nu - nu_prev) <= opts.tol * std::abs(nu)) {
            EigResult res;
            res.nu = nu;
            res.vector = std::move(v_next);
            res.iterations = it;
            return res;
        }
        // In exact arithmetic the Rayleigh sequence of inverse power
        // iteration is monotone non-increasing, so an increase means the
        // inner-solve noise floor has been reached: further iterations only
        // wander inside the noise band. The previous (smaller) value is the
        // better estimate of the smallest eigenvalue.
        if (it > 1 && nu > nu_prev) {
            EigResult res;
            res.nu = nu_prev;
            res.vector = std::move(v_prev);
            res.iterations = it;
            return res;
        }
        v_prev = std::move(v);
        v = std::move(v_next);
        nu_prev = nu;
    }
    throw NonConvergence("smallest_generalized_eig: iteration budget exhausted",
                         opts.max_iter, 0.0);
}

} // namespace varfrac
