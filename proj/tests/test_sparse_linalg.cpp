#include <varfrac/sparse_linalg.hpp>

#include "dense_oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

using namespace varfrac;
using testsupport::Dense;

namespace {

// deterministic SPD test matrix: diagonally dominant with random couplings
void random_spd(int n, std::uint32_t seed, Dense& dense, std::vector<Triplet>& trips) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    dense = Dense::zeros(n);
    trips.clear();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if ((gen() & 3u) != 0u) continue; // sparse couplings
            double v = 0.3 * uni(gen);
            dense.at(i, j) = v;
            dense.at(j, i) = v;
            trips.push_back({i, j, v});
            trips.push_back({j, i, v});
        }
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += std::abs(dense.at(i, j));
        double d = row + 1.0 + std::abs(uni(gen));
        dense.at(i, i) = d;
        trips.push_back({i, i, d});
    }
}

} // namespace

TEST_SUITE_BEGIN("sparse_linalg");

TEST_CASE("triplet assembly sums duplicates and ignores input order") {
    std::vector<Triplet> trips = {
        {0, 0, 1.5}, {1, 1, 2.0}, {0, 1, 0.25}, {0, 0, 0.5}, {1, 0, 0.25},
        {2, 2, 3.0}, {0, 1, 0.25}, {2, 0, -1.0},
    };
    SparseMatrix a = SparseMatrix::from_triplets(3, 3, trips);
    CHECK(a.rows() == 3);
    CHECK(a.cols() == 3);

    // dense reconstruction
    auto dense_of = [](const SparseMatrix& m) {
        std::vector<double> d(static_cast<std::size_t>(m.rows()) * m.cols(), 0.0);
        for (int i = 0; i < m.rows(); ++i)
            for (int k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k)
                d[i * m.cols() + m.col_idx()[k]] += m.values()[k];
        return d;
    };
    std::vector<double> d = dense_of(a);
    CHECK(d[0 * 3 + 0] == 2.0);
    CHECK(d[0 * 3 + 1] == 0.5);
    CHECK(d[1 * 3 + 0] == 0.25);
    CHECK(d[1 * 3 + 1] == 2.0);
    CHECK(d[2 * 3 + 2] == 3.0);
    CHECK(d[2 * 3 + 0] == -1.0);

    // any permutation of the triplet stream produces bit-identical storage
    std::vector<Triplet> shuffled = trips;
    std::mt19937 gen(99);
    for (int round = 0; round < 5; ++round) {
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        SparseMatrix b = SparseMatrix::from_triplets(3, 3, shuffled);
        CHECK(b.row_ptr() == a.row_ptr());
        CHECK(b.col_idx() == a.col_idx());
        CHECK(b.values() == a.values());
    }
}

TEST_CASE("multiply, bilinear, and diagonal agree with dense arithmetic") {
    Dense dense;
    std::vector<Triplet> trips;
    random_spd(24, 17u, dense, trips);
    SparseMatrix a = SparseMatrix::from_triplets(24, 24, trips);

    std::mt19937 gen(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> x(24), y(24);
    for (auto& v : x) v = uni(gen);
    for (auto& v : y) v = uni(gen);

    std::vector<double> ax = a.apply(x);
    for (int i = 0; i < 24; ++i) {
        double want = 0.0;
        for (int j = 0; j < 24; ++j) want += dense.at(i, j) * x[j];
        CHECK(ax[i] == doctest::Approx(want).epsilon(1e-13));
    }

    double want_bis = 0.0;
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j) want_bis += x[i] * dense.at(i, j) * y[j];
    CHECK(a.bilinear(x, y) == doctest::Approx(want_bis).epsilon(1e-12));

    std::vector<double> diag = a.diagonal();
    for (int i = 0; i < 24; ++i) CHECK(diag[i] == dense.at(i, i));

    CHECK(dot(x, y) == doctest::Approx([&] {
              double s = 0.0;
              for (int i = 0; i < 24; ++i) s += x[i] * y[i];
              return s;
          }()).epsilon(1e-14));
    CHECK(norm2(x) == doctest::Approx(std::sqrt(dot(x, x))).epsilon(1e-14));
}

TEST_CASE("cg solves an SPD system to the direct-solve answer") {
    Dense dense;
    std::vector<Triplet> trips;
    random_spd(60, 23u, dense, trips);
    SparseMatrix a = SparseMatrix::from_triplets(60, 60, trips);

    std::mt19937 gen(31);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> b(60);
    for (auto& v : b) v = uni(gen);

    CgOptions opts;
    opts.tol = 1e-12;
    CgResult res = cg_solve(a, b, opts);
    CHECK(res.residual <= 1e-12);
    std::vector<double> direct = testsupport::cholesky_solve(dense, b);
    for (int i = 0; i < 60; ++i)
        CHECK(res.x[i] == doctest::Approx(direct[i]).epsilon(1e-9));

    SUBCASE("warm start from the solution converges immediately") {
        CgOptions warm = opts;
        warm.x0 = &res.x;
        CgResult again = cg_solve(a, b, warm);
        CHECK(again.iterations <= 1);
    }

    SUBCASE("zero right-hand side returns zero without iterating") {
        CgResult zero = cg_solve(a, std::vector<double>(60, 0.0));
        CHECK(zero.iterations == 0);
        for (double v : zero.x) CHECK(v == 0.0);
    }
}

TEST_CASE("cg past its budget throws with diagnostics attached") {
    Dense dense;
    std::vector<Triplet> trips;
    random_spd(80, 41u, dense, trips);
    SparseMatrix a = SparseMatrix::from_triplets(80, 80, trips);
    std::vector<double> b(80, 1.0);
    CgOptions opts;
    opts.tol = 1e-14;
    opts.max_iter = 1;
    CHECK_THROWS_AS(cg_solve(a, b, opts), NonConvergence);
    try {
        cg_solve(a, b, opts);
    } catch (const NonConvergence& e) {
        CHECK(e.iterations == 1);
        CHECK(e.residual > 0.0);
    }
}

TEST_CASE("smallest generalized eigenvalue matches the dense reduction") {
    Dense da, db;
    std::vector<Triplet> ta, tb;
    random_spd(40, 7u, da, ta);
    random_spd(40, 13u, db, tb);
    SparseMatrix a = SparseMatrix::from_triplets(40, 40, ta);
    SparseMatrix b = SparseMatrix::from_triplets(40, 40, tb);

    EigResult res = smallest_generalized_eig(a, b);
    double ref = testsupport::dense_smallest_generalized_eig(da, db);
    CHECK(res.nu == doctest::Approx(ref).epsilon(1e-7));
    CHECK(res.nu > 0.0);
    CHECK(static_cast<int>(res.vector.size()) == 40);

    SUBCASE("the eigenvector achieves the Rayleigh quotient") {
        double num = a.bilinear(res.vector, res.vector);
        double den = b.bilinear(res.vector, res.vector);
        CHECK(num / den == doctest::Approx(res.nu).epsilon(1e-7));
    }

    SUBCASE("identical options reproduce bitwise, other seeds agree numerically") {
        EigResult again = smallest_generalized_eig(a, b);
        CHECK(again.nu == res.nu);
        CHECK(again.iterations == res.iterations);
        CHECK(again.vector == res.vector);
        EigOptions other;
        other.seed = 12345;
        EigResult seeded = smallest_generalized_eig(a, b, other);
        CHECK(seeded.nu == doctest::Approx(res.nu).epsilon(1e-7));
    }
}

TEST_CASE("smallest eigenvalue of a diagonal pencil is the smallest ratio") {
    std::vector<Triplet> ta = {{0, 0, 3.0}, {1, 1, 10.0}, {2, 2, 7.0}};
    std::vector<Triplet> tb = {{0, 0, 1.0}, {1, 1, 2.0}, {2, 2, 1.0}};
    SparseMatrix a = SparseMatrix::from_triplets(3, 3, ta);
    SparseMatrix b = SparseMatrix::from_triplets(3, 3, tb);
    EigResult res = smallest_generalized_eig(a, b);
    CHECK(res.nu == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_SUITE_END();
