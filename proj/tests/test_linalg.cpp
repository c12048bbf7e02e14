#include <doctest.h>

#include <random>

#include "linalg.hpp"
#include "testutil.hpp"

using namespace newtonlab;

namespace {

double residual_norm(const DenseMatrix& a, const Vector& x, const Vector& b) {
    Vector ax(b.size());
    a.apply(x, ax);
    for (size_t i = 0; i < ax.size(); ++i) ax[i] -= b[i];
    return euclidean_norm(ax);
}

}  // namespace

TEST_CASE("dense solve: identity and diagonal") {
    const Vector b{3.0, -1.0};
    CHECK(solve_dense(DenseMatrix::identity(2), b) == Vector{3.0, -1.0});

    DenseMatrix d(2, 2);
    d.at(0, 0) = 2.0;
    d.at(1, 1) = 4.0;
    const Vector x = solve_dense(d, Vector{2.0, 8.0});
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(2.0));
}

TEST_CASE("dense solve: zero matrix is singular") {
    DenseMatrix z(2, 2);
    CHECK_THROWS_AS(solve_dense(z, Vector{1.0, 1.0}), SingularMatrixError);
}

TEST_CASE("dense solve: residual bound on random well-conditioned systems") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        DenseMatrix a(n, n);
        for (double& e : a.entries) {
            e = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        }
        for (int i = 0; i < n; ++i) a.at(i, i) += n;  // diagonally dominant
        const Vector b = testutil::random_vector(rng, n, -5.0, 5.0);
        const Vector x = solve_dense(a, b);
        CHECK(residual_norm(a, x, b) <= 1e-12 * std::max(1.0, euclidean_norm(b)));
    }
}

TEST_CASE("tridiagonal solve: identity") {
    TridiagonalMatrix t(3);
    t.diag = {1.0, 1.0, 1.0};
    const Vector x = solve_tridiagonal(t, Vector{1.0, 2.0, 3.0});
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(2.0));
    CHECK(x[2] == doctest::Approx(3.0));
}

TEST_CASE("tridiagonal solve: 2x2 second-difference system") {
    // [[2,-1],[-1,2]] x = (1,0) eliminates by hand to x = (2/3, 1/3).
    TridiagonalMatrix t(2);
    t.diag = {2.0, 2.0};
    t.lower = {-1.0};
    t.upper = {-1.0};
    const Vector x = solve_tridiagonal(t, Vector{1.0, 0.0});
    CHECK(x[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("tridiagonal solve: zero pivot chain is singular") {
    TridiagonalMatrix t(3);
    t.diag = {0.0, 1.0, 1.0};
    t.lower = {0.0, 0.0};
    t.upper = {1.0, 1.0};
    CHECK_THROWS_AS(solve_tridiagonal(t, Vector{1.0, 1.0, 1.0}), SingularMatrixError);
}

TEST_CASE("tridiagonal solve agrees with dense elimination") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 30);
        TridiagonalMatrix t(n);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (double& v : t.lower) v = dist(rng);
        for (double& v : t.upper) v = dist(rng);
        for (int i = 0; i < n; ++i) t.diag[i] = dist(rng) + 3.0;
        const Vector b = testutil::random_vector(rng, n, -2.0, 2.0);

        const Vector x_tri = solve_tridiagonal(t, b);
        const Vector x_dense = solve_dense(t.to_dense(), b);
        double diff = 0.0;
        for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(x_tri[i] - x_dense[i]));
        CHECK(diff <= 1e-10);

        CHECK(residual_norm(t.to_dense(), x_tri, b) <= 1e-10 * std::max(1.0, euclidean_norm(b)));
    }
}

namespace {

// 5-point stencil matrix on the interior of an m x m grid.
SparseCsrMatrix laplacian_csr(int m) {
    SparseCsrMatrix a;
    a.n = m * m;
    a.row_offsets.assign(a.n + 1, 0);
    auto idx = [m](int i, int j) { return j * m + i; };
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            const int row = idx(i, j);
            if (j > 0) {
                a.cols.push_back(idx(i, j - 1));
                a.values.push_back(-1.0);
            }
            if (i > 0) {
                a.cols.push_back(idx(i - 1, j));
                a.values.push_back(-1.0);
            }
            a.cols.push_back(row);
            a.values.push_back(4.0);
            if (i < m - 1) {
                a.cols.push_back(idx(i + 1, j));
                a.values.push_back(-1.0);
            }
            if (j < m - 1) {
                a.cols.push_back(idx(i, j + 1));
                a.values.push_back(-1.0);
            }
            a.row_offsets[row + 1] = static_cast<int>(a.cols.size());
        }
    }
    return a;
}

}  // namespace

TEST_CASE("sparse symmetric solve: identity and scaled identity") {
    SparseCsrMatrix eye;
    eye.n = 4;
    eye.row_offsets = {0, 1, 2, 3, 4};
    eye.cols = {0, 1, 2, 3};
    eye.values = {1.0, 1.0, 1.0, 1.0};
    const Vector b{0.5, -2.0, 3.0, 7.0};
    const Vector x = solve_sparse_sym(eye, b);
    for (int i = 0; i < 4; ++i) CHECK(x[i] == doctest::Approx(b[i]).epsilon(1e-12));

    for (double& v : eye.values) v = 2.0;
    const Vector y = solve_sparse_sym(eye, Vector{4.0, 4.0, 4.0, 4.0});
    for (int i = 0; i < 4; ++i) CHECK(y[i] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("sparse symmetric solve: Laplacian against dense elimination") {
    const SparseCsrMatrix a = laplacian_csr(3);
    Vector b(9, 0.0);
    b[4] = 1.0;  // center unit load
    const Vector x = solve_sparse_sym(a, b, 1e-12);
    const Vector x_dense = solve_dense(a.to_dense(), b);
    for (int i = 0; i < 9; ++i) CHECK(x[i] == doctest::Approx(x_dense[i]).epsilon(1e-9));
    // Center-weighted: the loaded node dominates every neighbor.
    for (int i = 0; i < 9; ++i) {
        if (i != 4) CHECK(x[4] > x[i]);
    }
}

TEST_CASE("sparse symmetric solve agrees with dense on random SPD systems") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 63);
        // Random symmetric tridiagonal-with-fringe SPD matrix in CSR form.
        TridiagonalMatrix t(n);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int i = 0; i + 1 < n; ++i) {
            const double v = dist(rng);
            t.lower[i] = v;
            t.upper[i] = v;
        }
        for (int i = 0; i < n; ++i) t.diag[i] = 3.0 + dist(rng);

        SparseCsrMatrix a;
        a.n = n;
        a.row_offsets.assign(n + 1, 0);
        for (int i = 0; i < n; ++i) {
            if (i > 0) {
                a.cols.push_back(i - 1);
                a.values.push_back(t.lower[i - 1]);
            }
            a.cols.push_back(i);
            a.values.push_back(t.diag[i]);
            if (i + 1 < n) {
                a.cols.push_back(i + 1);
                a.values.push_back(t.upper[i]);
            }
            a.row_offsets[i + 1] = static_cast<int>(a.cols.size());
        }

        const Vector b = testutil::random_vector(rng, n, -1.0, 1.0);
        const double tol = 1e-10;
        const Vector x = solve_sparse_sym(a, b, tol);
        const Vector x_dense = solve_dense(a.to_dense(), b);
        double diff = 0.0;
        for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(x[i] - x_dense[i]));
        CHECK(diff <= 1e-7);
        CHECK(residual_norm(a.to_dense(), x, b) <= tol * euclidean_norm(b));
    }
}

TEST_CASE("sparse symmetric solve handles an indefinite shifted stencil") {
    // Shift past the smallest stencil eigenvalues: indefinite but invertible.
    SparseCsrMatrix a = laplacian_csr(5);
    for (int i = 0; i < a.n; ++i) {
        for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
            if (a.cols[k] == i) a.values[k] -= 1.0;
        }
    }
    std::mt19937 rng(3);
    const Vector b = testutil::random_vector(rng, a.n, -1.0, 1.0);
    const Vector x = solve_sparse_sym(a, b, 1e-10);
    CHECK(residual_norm(a.to_dense(), x, b) <= 1e-10 * euclidean_norm(b));
}

TEST_CASE("sparse symmetric solve reports breakdown on a singular system") {
    // Projection-like diagonal with a zero block makes the system inconsistent.
    SparseCsrMatrix a;
    a.n = 3;
    a.row_offsets = {0, 1, 2, 3};
    a.cols = {0, 1, 2};
    a.values = {1.0, 0.0, 1.0};
    CHECK_THROWS_AS(solve_sparse_sym(a, Vector{1.0, 1.0, 1.0}, 1e-10), NoConvergenceError);
}
