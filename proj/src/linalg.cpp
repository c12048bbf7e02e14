#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace newtonlab {

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

void DenseMatrix::apply(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < rows; ++i) {
        double s = 0.0;
        const double* row = entries.data() + static_cast<size_t>(i) * cols;
        for (int j = 0; j < cols; ++j) s += row[j] * x[j];
        y[i] = s;
    }
}

void TridiagonalMatrix::apply(std::span<const double> x, std::span<double> y) const {
    const int n = size();
    for (int i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) s += lower[i - 1] * x[i - 1];
        if (i + 1 < n) s += upper[i] * x[i + 1];
        y[i] = s;
    }
}

DenseMatrix TridiagonalMatrix::to_dense() const {
    const int n = size();
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        m.at(i, i) = diag[i];
        if (i > 0) m.at(i, i - 1) = lower[i - 1];
        if (i + 1 < n) m.at(i, i + 1) = upper[i];
    }
    return m;
}

void SparseCsrMatrix::apply(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
            s += values[k] * x[cols[k]];
        }
        y[i] = s;
    }
}

DenseMatrix SparseCsrMatrix::to_dense() const {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
            m.at(i, cols[k]) = values[k];
        }
    }
    return m;
}

void solve_dense_in_place(DenseMatrix& a, std::span<double> b) {
    const int n = a.rows;

    for (int col = 0; col < n; ++col) {
        // Partial pivoting: pick the largest magnitude in the column.
        int pivot_row = col;
        double pivot_mag = std::abs(a.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double mag = std::abs(a.at(r, col));
            if (mag > pivot_mag) {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        if (pivot_mag < kPivotTol) {
            throw SingularMatrixError("dense solve: pivot below singularity threshold");
        }
        if (pivot_row != col) {
            for (int j = col; j < n; ++j) std::swap(a.at(col, j), a.at(pivot_row, j));
            std::swap(b[col], b[pivot_row]);
        }
        const double inv_pivot = 1.0 / a.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double factor = a.at(r, col) * inv_pivot;
            if (factor == 0.0) continue;
            a.at(r, col) = 0.0;
            for (int j = col + 1; j < n; ++j) a.at(r, j) -= factor * a.at(col, j);
            b[r] -= factor * b[col];
        }
    }

    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a.at(i, j) * b[j];
        b[i] = s / a.at(i, i);
    }
}

Vector solve_dense(DenseMatrix a, std::span<const double> b) {
    Vector x(b.begin(), b.end());
    solve_dense_in_place(a, x);
    return x;
}

void solve_tridiagonal_into(const TridiagonalMatrix& t, std::span<const double> b,
                            Vector& x, Vector& work) {
    const int n = t.size();
    x.resize(n);
    work.resize(2 * static_cast<size_t>(n));
    double* c_prime = work.data();
    double* d_prime = work.data() + n;

    if (std::abs(t.diag[0]) < kPivotTol) {
        throw SingularMatrixError("tridiagonal solve: zero leading pivot");
    }
    c_prime[0] = (n > 1) ? t.upper[0] / t.diag[0] : 0.0;
    d_prime[0] = b[0] / t.diag[0];

    for (int i = 1; i < n; ++i) {
        const double denom = t.diag[i] - t.lower[i - 1] * c_prime[i - 1];
        if (std::abs(denom) < kPivotTol) {
            throw SingularMatrixError("tridiagonal solve: pivot breakdown");
        }
        const double inv = 1.0 / denom;
        c_prime[i] = (i + 1 < n) ? t.upper[i] * inv : 0.0;
        d_prime[i] = (b[i] - t.lower[i - 1] * d_prime[i - 1]) * inv;
    }

    x[n - 1] = d_prime[n - 1];
    for (int i = n - 2; i >= 0; --i) {
        x[i] = d_prime[i] - c_prime[i] * x[i + 1];
    }
}

Vector solve_tridiagonal(const TridiagonalMatrix& t, std::span<const double> b) {
    Vector x, work;
    solve_tridiagonal_into(t, b, x, work);
    return x;
}

void MinresWorkspace::resize(size_t n) {
    for (Vector* v : {&v_prev, &v, &v_next, &av, &w, &w_prev, &w_prev2, &r}) {
        v->assign(n, 0.0);
    }
}

namespace {

// One MINRES cycle (fresh Lanczos process) starting from the current x.
// Runs until the recurrence's residual estimate drops below target, the
// process breaks down, or max_iters is spent. Returns iterations used.
int minres_cycle(const SparseCsrMatrix& a, std::span<const double> b, double target,
                 int max_iters, Vector& x, MinresWorkspace& ws) {
    const size_t n = static_cast<size_t>(a.n);

    // r = b - A x
    a.apply(x, ws.r);
    for (size_t i = 0; i < n; ++i) ws.r[i] = b[i] - ws.r[i];
    double beta = euclidean_norm(ws.r);
    if (beta <= target) return 0;

    std::fill(ws.v_prev.begin(), ws.v_prev.end(), 0.0);
    for (size_t i = 0; i < n; ++i) ws.v[i] = ws.r[i] / beta;
    std::fill(ws.w.begin(), ws.w.end(), 0.0);
    std::fill(ws.w_prev.begin(), ws.w_prev.end(), 0.0);

    double eta = beta;
    double gamma = 1.0, gamma_old = 1.0;
    double sigma = 0.0, sigma_old = 0.0;

    for (int k = 0; k < max_iters; ++k) {
        // Lanczos step.
        a.apply(ws.v, ws.av);
        const double alpha = dot(ws.v, ws.av);
        for (size_t i = 0; i < n; ++i) {
            ws.v_next[i] = ws.av[i] - alpha * ws.v[i] - beta * ws.v_prev[i];
        }
        const double beta_next = euclidean_norm(ws.v_next);

        // Givens rotations applied to the tridiagonal Lanczos matrix.
        const double delta = gamma * alpha - gamma_old * sigma * beta;
        const double rho1 = std::hypot(delta, beta_next);
        const double rho2 = sigma * alpha + gamma_old * gamma * beta;
        const double rho3 = sigma_old * beta;
        if (rho1 < 1e-300) return k + 1;  // stagnation; caller verifies and restarts

        gamma_old = gamma;
        sigma_old = sigma;
        gamma = delta / rho1;
        sigma = beta_next / rho1;

        ws.w_prev2.swap(ws.w_prev);
        ws.w_prev.swap(ws.w);
        for (size_t i = 0; i < n; ++i) {
            ws.w[i] = (ws.v[i] - rho3 * ws.w_prev2[i] - rho2 * ws.w_prev[i]) / rho1;
        }
        const double step = gamma * eta;
        for (size_t i = 0; i < n; ++i) x[i] += step * ws.w[i];
        eta = -sigma * eta;

        if (std::abs(eta) <= target) return k + 1;
        if (beta_next < 1e-300) return k + 1;  // exact breakdown: solution reached

        ws.v_prev.swap(ws.v);
        ws.v.swap(ws.v_next);
        for (size_t i = 0; i < n; ++i) ws.v[i] /= beta_next;
        beta = beta_next;
    }
    return max_iters;
}

}  // namespace

void solve_sparse_sym_into(const SparseCsrMatrix& a, std::span<const double> b, double tol,
                           Vector& x, MinresWorkspace& ws, const double* warm_start) {
    const size_t n = static_cast<size_t>(a.n);
    ws.resize(n);
    x.assign(n, 0.0);
    if (warm_start != nullptr) {
        std::copy(warm_start, warm_start + n, x.begin());
    }

    const double bnorm = euclidean_norm(b);
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return;
    }
    const double target = tol * bnorm;

    // The recurrence's residual estimate can drift from the true residual;
    // verify and restart with a fresh Krylov process until the budget is out.
    const int budget = 10 * a.n;
    int spent = 0;
    while (spent < budget) {
        const int used = minres_cycle(a, b, target, budget - spent, x, ws);
        spent += std::max(used, 1);

        a.apply(x, ws.r);
        double true_resid = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double d = b[i] - ws.r[i];
            true_resid += d * d;
        }
        true_resid = std::sqrt(true_resid);
        if (!std::isfinite(true_resid)) break;
        if (true_resid <= target) return;
    }
    throw NoConvergenceError("symmetric sparse solve: iteration budget exhausted");
}

Vector solve_sparse_sym(const SparseCsrMatrix& a, std::span<const double> b, double tol) {
    Vector x;
    MinresWorkspace ws;
    solve_sparse_sym_into(a, b, tol, x, ws);
    return x;
}

double euclidean_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

}  // namespace newtonlab
