#pragma once

#include <string>

#include "problem.hpp"

namespace newtonlab {

/// Thrown when an operation is handed a state outside the problem domain.
class OutOfDomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class StepMode {
    Classical,  // t_n = 1
    Fixed,      // constant t in (0,1]
    Adaptive,   // prediction step size from the tolerance tau
};

struct SolverConfig {
    StepMode mode = StepMode::Classical;
    double fixed_step = 1.0;   // used by Fixed; must lie in (0,1]
    double tau = 0.1;          // used by Adaptive; must be positive
    int max_iters = 100;
    double update_tol = 1e-8;  // convergence threshold on the update norm
    double blowup_norm = 1e8;  // divergence threshold on the state norm

    static SolverConfig classical(int max_iters = 100);
    static SolverConfig fixed(double t, int max_iters = 100);
    static SolverConfig adaptive(double tau, int max_iters = 100);
    void validate() const;  // throws std::invalid_argument
};

enum class SolveStatus {
    Converged,
    MaxIters,
    Singular,
    LeftDomain,
    Blowup,
};

const char* to_string(SolveStatus s);

/// Full iteration history.
///
/// Length convention: residual_norms has one entry per accepted iterate
/// (same length as iterates). steps and update_norms record attempted
/// transitions; they are one shorter than iterates except when the final
/// step was rejected (LeftDomain/Blowup), in which case they have the same
/// length as iterates and the rejected state is not stored.
struct SolveTrace {
    std::vector<Vector> iterates;
    std::vector<double> steps;
    std::vector<double> residual_norms;
    std::vector<double> update_norms;
    SolveStatus status = SolveStatus::MaxIters;

    int iterations() const { return static_cast<int>(steps.size()); }
    const Vector& final_state() const { return iterates.back(); }
};

/// Euler history of the reference flow. times are uniformly spaced by dt.
struct FlowTrajectory {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<double> residual_norms;
    std::vector<double> update_norms;
    SolveStatus status = SolveStatus::MaxIters;

    const Vector& final_state() const { return states.back(); }
};

struct FlowConfig {
    double dt = 1e-2;
    double t_max = 50.0;
    double residual_stop = 1e-8;
};

/// The Newton direction N(x) = -F'(x)^{-1} F(x). Throws OutOfDomainError
/// when x violates the domain predicate; propagates SingularMatrixError /
/// NoConvergenceError from the linear solve.
Vector newton_raphson_transform(const NonlinearProblem& p, const Vector& x);

/// One damped step x + t * N(x) for t in (0,1].
Vector newton_step(const NonlinearProblem& p, const Vector& x, double t);

/// Prediction step size t = min(sqrt(2*tau / nrt_norm), 1). A vanishing
/// direction norm yields the full step.
double adaptive_step(double tau, double nrt_norm);

/// First-order deviation bound between the linearized and the exact flow
/// trajectory after time t: ||N(x0)|| * (t + exp(-t) - 1).
double error_indicator(double nrt_norm_at_x0, double t);

/// Runs the damped Newton iteration from x0 until convergence
/// (t_n * ||N(x_n)|| <= update_tol), the iteration budget, or a failure.
/// Failures are encoded in the trace status; nothing is thrown for them.
SolveTrace solve(const NonlinearProblem& p, const Vector& x0, const SolverConfig& cfg);

/// Explicit Euler integration of the Newton flow with uniform step dt,
/// stopping at ||F|| <= residual_stop, at t_max, or at a failure. The
/// trajectory ends early in the failure cases; status tells which.
/// (Converged here means the residual threshold was reached.)
FlowTrajectory flow(const NonlinearProblem& p, const Vector& x0, const FlowConfig& cfg);

/// Flow endpoint without history, for oracle classification in bulk runs.
/// Produces bit-identical states to flow() at a fraction of the memory.
struct FlowEndpoint {
    Vector state;
    double residual_norm = 0.0;
    double time = 0.0;
    SolveStatus status = SolveStatus::MaxIters;
    bool reached_residual_stop() const { return status == SolveStatus::Converged; }
};

FlowEndpoint flow_endpoint(const NonlinearProblem& p, const Vector& x0, const FlowConfig& cfg);

}  // namespace newtonlab
