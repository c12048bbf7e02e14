#include "solver.hpp"

#include <cmath>
#include <stdexcept>

namespace newtonlab {

SolverConfig SolverConfig::classical(int max_iters) {
    SolverConfig c;
    c.mode = StepMode::Classical;
    c.max_iters = max_iters;
    return c;
}

SolverConfig SolverConfig::fixed(double t, int max_iters) {
    SolverConfig c;
    c.mode = StepMode::Fixed;
    c.fixed_step = t;
    c.max_iters = max_iters;
    return c;
}

SolverConfig SolverConfig::adaptive(double tau, int max_iters) {
    SolverConfig c;
    c.mode = StepMode::Adaptive;
    c.tau = tau;
    c.max_iters = max_iters;
    return c;
}

void SolverConfig::validate() const {
    if (mode == StepMode::Fixed && !(fixed_step > 0.0 && fixed_step <= 1.0)) {
        throw std::invalid_argument("fixed step size must lie in (0,1]");
    }
    if (mode == StepMode::Adaptive && !(tau > 0.0)) {
        throw std::invalid_argument("adaptive tolerance tau must be positive");
    }
    if (max_iters <= 0) throw std::invalid_argument("max_iters must be positive");
    if (!(update_tol > 0.0)) throw std::invalid_argument("update_tol must be positive");
    if (!(blowup_norm > 0.0)) throw std::invalid_argument("blowup_norm must be positive");
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::MaxIters: return "MaxIters";
        case SolveStatus::Singular: return "Singular";
        case SolveStatus::LeftDomain: return "LeftDomain";
        case SolveStatus::Blowup: return "Blowup";
    }
    return "Unknown";
}

double adaptive_step(double tau, double nrt_norm) {
    if (nrt_norm <= 2.0 * tau) return 1.0;  // includes nrt_norm == 0
    return std::sqrt(2.0 * tau / nrt_norm);
}

double error_indicator(double nrt_norm_at_x0, double t) {
    // t + e^{-t} - 1 via expm1 to survive the cancellation at small t.
    return nrt_norm_at_x0 * (t + std::expm1(-t));
}

namespace {

/// Computes N(x) = -F'(x)^{-1} F(x) into `out` given the residual already
/// evaluated in `scratch.rhs`. Reuses jacobian storage across calls.
void nrt_into(const NonlinearProblem& p, const Vector& x, Jacobian& jac,
              LinearScratch& scratch, Vector& out) {
    p.jacobian(x, jac);
    for (double& v : scratch.rhs) v = -v;
    solve_jacobian_system(jac, scratch.rhs, out, scratch);
}

}  // namespace

Vector newton_raphson_transform(const NonlinearProblem& p, const Vector& x) {
    if (!p.in_domain(x)) {
        throw OutOfDomainError("state outside the problem domain");
    }
    Jacobian jac;
    LinearScratch scratch;
    Vector out;
    p.residual(x, scratch.rhs);
    nrt_into(p, x, jac, scratch, out);
    return out;
}

Vector newton_step(const NonlinearProblem& p, const Vector& x, double t) {
    Vector n = newton_raphson_transform(p, x);
    Vector next(x.size());
    for (size_t i = 0; i < x.size(); ++i) next[i] = x[i] + t * n[i];
    return next;
}

SolveTrace solve(const NonlinearProblem& p, const Vector& x0, const SolverConfig& cfg) {
    cfg.validate();
    if (!p.in_domain(x0)) {
        throw OutOfDomainError("initial guess outside the problem domain");
    }

    SolveTrace trace;
    trace.iterates.reserve(16);
    Jacobian jac;
    LinearScratch scratch;
    Vector direction;
    Vector residual;

    p.residual(x0, residual);
    trace.iterates.push_back(x0);
    trace.residual_norms.push_back(p.norm(residual));

    Vector x = x0;
    for (int n = 0; n < cfg.max_iters; ++n) {
        scratch.rhs = residual;
        try {
            nrt_into(p, x, jac, scratch, direction);
        } catch (const SingularMatrixError&) {
            trace.status = SolveStatus::Singular;
            return trace;
        } catch (const NoConvergenceError&) {
            trace.status = SolveStatus::Singular;
            return trace;
        }

        const double update_norm = p.norm(direction);
        double t = 1.0;
        switch (cfg.mode) {
            case StepMode::Classical: t = 1.0; break;
            case StepMode::Fixed: t = cfg.fixed_step; break;
            case StepMode::Adaptive: t = adaptive_step(cfg.tau, update_norm); break;
        }
        trace.steps.push_back(t);
        trace.update_norms.push_back(update_norm);

        for (size_t i = 0; i < x.size(); ++i) x[i] += t * direction[i];

        if (!all_finite(x) || p.norm(x) > cfg.blowup_norm) {
            trace.status = SolveStatus::Blowup;
            return trace;
        }
        if (!p.in_domain(x)) {
            trace.status = SolveStatus::LeftDomain;
            return trace;
        }

        p.residual(x, residual);
        const double residual_norm = p.norm(residual);
        if (!std::isfinite(residual_norm)) {
            trace.status = SolveStatus::Blowup;
            return trace;
        }

        trace.iterates.push_back(x);
        trace.residual_norms.push_back(residual_norm);

        // ||delta_n|| = t_n * ||N(x_n)|| by positive homogeneity of the norm.
        if (t * update_norm <= cfg.update_tol) {
            trace.status = SolveStatus::Converged;
            return trace;
        }
    }
    trace.status = SolveStatus::MaxIters;
    return trace;
}

namespace {

/// Shared Euler stepper. `record` is invoked for every accepted state
/// (including x0); `record_update` once per attempted step with the Newton
/// direction norm at the state just recorded.
template <typename Recorder, typename UpdateRecorder>
SolveStatus flow_core(const NonlinearProblem& p, const Vector& x0, const FlowConfig& cfg,
                      Recorder&& record, UpdateRecorder&& record_update, Vector& final_state,
                      double& final_residual, double& final_time) {
    if (!p.in_domain(x0)) {
        throw OutOfDomainError("initial state outside the problem domain");
    }
    if (!(cfg.dt > 0.0 && cfg.dt <= 1.0)) {
        throw std::invalid_argument("flow step size dt must lie in (0,1]");
    }

    Jacobian jac;
    LinearScratch scratch;
    scratch.warm_start = true;  // consecutive Euler steps have nearby directions
    Vector direction;
    Vector residual;
    Vector x = x0;

    const long max_steps = static_cast<long>(std::ceil(cfg.t_max / cfg.dt));
    SolveStatus status = SolveStatus::MaxIters;

    p.residual(x, residual);
    double residual_norm = p.norm(residual);
    double time = 0.0;

    for (long k = 0;; ++k) {
        record(time, x, residual_norm);
        final_time = time;
        if (residual_norm <= cfg.residual_stop) {
            status = SolveStatus::Converged;
            break;
        }
        if (k >= max_steps) {
            status = SolveStatus::MaxIters;
            break;
        }

        scratch.rhs = residual;
        try {
            nrt_into(p, x, jac, scratch, direction);
        } catch (const SingularMatrixError&) {
            status = SolveStatus::Singular;
            break;
        } catch (const NoConvergenceError&) {
            status = SolveStatus::Singular;
            break;
        }
        record_update(p.norm(direction));

        for (size_t i = 0; i < x.size(); ++i) x[i] += cfg.dt * direction[i];
        time = static_cast<double>(k + 1) * cfg.dt;

        if (!all_finite(x)) {
            status = SolveStatus::Blowup;
            break;
        }
        if (!p.in_domain(x)) {
            status = SolveStatus::LeftDomain;
            break;
        }
        p.residual(x, residual);
        residual_norm = p.norm(residual);
        if (!std::isfinite(residual_norm)) {
            status = SolveStatus::Blowup;
            break;
        }
    }

    final_state = std::move(x);
    final_residual = residual_norm;
    return status;
}

}  // namespace

FlowTrajectory flow(const NonlinearProblem& p, const Vector& x0, const FlowConfig& cfg) {
    FlowTrajectory traj;
    traj.dt = cfg.dt;
    Vector final_state;
    double final_residual = 0.0, final_time = 0.0;
    traj.status = flow_core(
        p, x0, cfg,
        [&](double t, const Vector& x, double rn) {
            traj.times.push_back(t);
            traj.states.push_back(x);
            traj.residual_norms.push_back(rn);
        },
        [&](double un) { traj.update_norms.push_back(un); }, final_state, final_residual,
        final_time);
    return traj;
}

FlowEndpoint flow_endpoint(const NonlinearProblem& p, const Vector& x0, const FlowConfig& cfg) {
    FlowEndpoint ep;
    ep.status = flow_core(
        p, x0, cfg, [](double, const Vector&, double) {}, [](double) {}, ep.state,
        ep.residual_norm, ep.time);
    return ep;
}

}  // namespace newtonlab
