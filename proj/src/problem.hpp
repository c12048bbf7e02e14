#pragma once

#include <functional>
#include <variant>

#include "linalg.hpp"

namespace newtonlab {

/// A Jacobian is produced in whichever storage fits the problem class:
/// dense for small algebraic systems, tridiagonal for 1-D two-point
/// problems, CSR for 2-D grid problems.
using Jacobian = std::variant<DenseMatrix, TridiagonalMatrix, SparseCsrMatrix>;

/// A finite-dimensional nonlinear system F(x) = 0 together with its
/// Jacobian, domain predicate, and the norm used by the step controller.
///
/// Evaluation closures write into caller-provided storage so that hot loops
/// (flow integration, basin sampling) do not allocate per call. All closures
/// must be pure; problems are immutable after construction and safe to share
/// across threads.
struct NonlinearProblem {
    int dim = 0;

    /// out is resized by the callee; out = F(x).
    std::function<void(const Vector& x, Vector& out)> residual;

    /// Fills `jac` with F'(x). Implementations reuse the storage already
    /// held by the variant when it has the right alternative.
    std::function<void(const Vector& x, Jacobian& jac)> jacobian;

    /// Domain predicate. Iterates leaving the domain terminate a solve.
    std::function<bool(const Vector& x)> in_domain;

    /// The norm applied to states, updates, and residual coefficient
    /// vectors (Euclidean for algebraic problems, discrete L2 for the
    /// discretized boundary-value problems).
    std::function<double(const Vector& v)> norm;
};

/// Linear-solve scratch shared across Newton steps.
struct LinearScratch {
    Vector rhs;
    Vector work;
    MinresWorkspace minres;
    double sparse_tol = 1e-10;
    /// When true, the previous solution seeds the next sparse solve.
    bool warm_start = false;
    Vector last_solution;
    bool has_last = false;
};

/// Solves jac * out = rhs for the Newton update. Dense systems are
/// factorized in place (jac's storage is clobbered); rhs is consumed.
/// Throws SingularMatrixError / NoConvergenceError on failure.
void solve_jacobian_system(Jacobian& jac, Vector& rhs, Vector& out, LinearScratch& scratch);

/// Fetches the alternative T from the variant, reusing its storage when
/// possible.
template <typename T>
T& ensure_alternative(Jacobian& jac) {
    if (auto* p = std::get_if<T>(&jac)) return *p;
    jac.emplace<T>();
    return std::get<T>(jac);
}

}  // namespace newtonlab
