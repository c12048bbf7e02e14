#include "trace_json.hpp"

#include <json.hpp>

namespace newtonlab {

namespace {

using nlohmann::json;

json trace_body(const SolveTrace& trace, const std::string& problem_id) {
    json j;
    j["problem"] = problem_id;
    j["iterates"] = trace.iterates;
    j["steps"] = trace.steps;
    j["residual_norms"] = trace.residual_norms;
    j["update_norms"] = trace.update_norms;
    j["status"] = to_string(trace.status);
    return j;
}

void add_mode(json& j, const SolverConfig& cfg) {
    switch (cfg.mode) {
        case StepMode::Classical:
            j["mode"] = "classical";
            break;
        case StepMode::Fixed:
            j["mode"] = "fixed";
            j["t"] = cfg.fixed_step;
            break;
        case StepMode::Adaptive:
            j["mode"] = "adaptive";
            j["tau"] = cfg.tau;
            break;
    }
}

}  // namespace

std::string trace_to_json(const SolveTrace& trace, const std::string& problem_id,
                          const SolverConfig& cfg, int indent) {
    json j = trace_body(trace, problem_id);
    add_mode(j, cfg);
    return j.dump(indent);
}

std::string trajectory_to_json(const FlowTrajectory& traj, const std::string& problem_id,
                               int indent) {
    json j;
    j["problem"] = problem_id;
    j["mode"] = "flow";
    j["dt"] = traj.dt;
    j["times"] = traj.times;
    j["iterates"] = traj.states;
    j["residual_norms"] = traj.residual_norms;
    j["update_norms"] = traj.update_norms;
    j["status"] = to_string(traj.status);
    return j.dump(indent);
}

}  // namespace newtonlab
