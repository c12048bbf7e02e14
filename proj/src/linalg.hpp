#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace newtonlab {

using Vector = std::vector<double>;

/// Elimination hit a pivot below the singularity threshold; the matrix is
/// treated as non-invertible.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative solve exhausted its iteration budget without reaching the
/// requested residual reduction.
class NoConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Any pivot with magnitude below this counts as a singularity.
inline constexpr double kPivotTol = 1e-14;

/// Row-major dense matrix.
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> entries;

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), entries(static_cast<size_t>(r) * c, 0.0) {}

    static DenseMatrix identity(int n);

    double& at(int i, int j) { return entries[static_cast<size_t>(i) * cols + j]; }
    double at(int i, int j) const { return entries[static_cast<size_t>(i) * cols + j]; }

    /// y = A x
    void apply(std::span<const double> x, std::span<double> y) const;
};

/// Tridiagonal matrix stored as three bands (lower/diag/upper of lengths
/// n-1, n, n-1).
struct TridiagonalMatrix {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    TridiagonalMatrix() = default;
    explicit TridiagonalMatrix(int n)
        : lower(n > 0 ? n - 1 : 0, 0.0), diag(n, 0.0), upper(n > 0 ? n - 1 : 0, 0.0) {}

    int size() const { return static_cast<int>(diag.size()); }

    void apply(std::span<const double> x, std::span<double> y) const;
    DenseMatrix to_dense() const;
};

/// Compressed sparse row matrix (square). Column indices are strictly
/// increasing within each row.
struct SparseCsrMatrix {
    int n = 0;
    std::vector<int> row_offsets;  // length n+1
    std::vector<int> cols;
    std::vector<double> values;

    void apply(std::span<const double> x, std::span<double> y) const;
    DenseMatrix to_dense() const;
};

/// Scratch buffers for the iterative symmetric solver, reusable across calls
/// of the same dimension.
struct MinresWorkspace {
    Vector v_prev, v, v_next, av, w, w_prev, w_prev2, r;
    void resize(size_t n);
};

/// Gaussian elimination with partial pivoting, in place: `a` is overwritten
/// by its factorization and `b` by the solution. Throws SingularMatrixError
/// when a pivot falls below kPivotTol.
void solve_dense_in_place(DenseMatrix& a, std::span<double> b);

/// Convenience wrapper over solve_dense_in_place.
Vector solve_dense(DenseMatrix a, std::span<const double> b);

/// Thomas elimination. `work` is resized internally; the solution lands in
/// `x`. Pivot failures throw SingularMatrixError.
void solve_tridiagonal_into(const TridiagonalMatrix& t, std::span<const double> b,
                            Vector& x, Vector& work);

Vector solve_tridiagonal(const TridiagonalMatrix& t, std::span<const double> b);

/// MINRES for symmetric systems. Solves A x = b to relative residual `tol`
/// (checked against the true residual, not only the recurrence estimate)
/// within an iteration budget of 10*n; throws NoConvergenceError when the
/// budget runs out. `warm_start` (when non-null, length n) seeds the
/// iteration. Works for indefinite symmetric matrices; positive definiteness
/// is not required.
void solve_sparse_sym_into(const SparseCsrMatrix& a, std::span<const double> b, double tol,
                           Vector& x, MinresWorkspace& ws,
                           const double* warm_start = nullptr);

Vector solve_sparse_sym(const SparseCsrMatrix& a, std::span<const double> b, double tol = 1e-10);

/// Euclidean norm of a coefficient vector.
double euclidean_norm(std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);

bool all_finite(std::span<const double> v);

}  // namespace newtonlab
