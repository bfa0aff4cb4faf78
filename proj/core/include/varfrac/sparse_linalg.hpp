#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace varfrac {

/// Thrown by iterative solvers that hit their iteration budget; carries the
/// last relative residual so callers can report how close the run got.
class NonConvergence : public std::runtime_error {
  public:
    NonConvergence(const char* what, int iterations, double residual)
        : std::runtime_error(what), iterations(iterations), residual(residual) {}
    int iterations;
    double residual;
};

struct Triplet {
    int row;
    int col;
    double value;
};

/// Compressed sparse row matrix. Assembly goes through from_triplets, which
/// sorts and sums duplicates deterministically, so identical triplet streams
/// yield bit-identical matrices regardless of how they were produced.
class SparseMatrix {
  public:
    SparseMatrix() = default;
    static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nonzeros() const { return val_.size(); }

    void multiply(const double* x, double* y) const;
    std::vector<double> apply(const std::vector<double>& x) const;

    /// x^T (A y); the caller guarantees matching sizes.
    double bilinear(const std::vector<double>& x, const std::vector<double>& y) const;

    std::vector<double> diagonal() const;

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_; }
    const std::vector<double>& values() const { return val_; }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_;
    std::vector<double> val_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

struct CgOptions {
    double tol = 1e-10;          ///< stop when ||Ax-b|| <= tol*||b||
    int max_iter = 0;            ///< 0 = 2n + 1000
    const std::vector<double>* x0 = nullptr;
};

struct CgResult {
    std::vector<double> x;
    int iterations = 0;
    double residual = 0.0; ///< final ||Ax-b|| / ||b|| (0 when b = 0)
};

/// Conjugate gradients for SPD systems, preconditioned by incomplete Cholesky
/// on the matrix pattern (falling back to diagonal scaling if the factor
/// breaks down). b = 0 returns x = 0 with zero iterations. Throws
/// NonConvergence past the budget.
CgResult cg_solve(const SparseMatrix& A, const std::vector<double>& b,
                  const CgOptions& opts = {});

struct EigOptions {
    double tol = 1e-9;   ///< relative Rayleigh-quotient change
    int max_iter = 400;
    double cg_tol = 1e-11;
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

struct EigResult {
    double nu = 0.0;
    std::vector<double> vector;
    int iterations = 0;
};

/// Smallest eigenvalue nu of the SPD pencil A v = nu B v by inverse power
/// iteration (inner CG solves warm-started, iterates B-normalized, start
/// vector from a fixed-seed generator so runs are reproducible). Stops when
/// the Rayleigh value drifts less than tol per step, or at the first Rayleigh
/// increase (the exact sequence decreases monotonically, so an increase marks
/// the inner-solve noise floor).
EigResult smallest_generalized_eig(const SparseMatrix& A, const SparseMatrix& B,
                                   const EigOptions& opts = {});

} // namespace varfrac
