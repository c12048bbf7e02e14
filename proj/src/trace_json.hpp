#pragma once

#include <string>

#include "solver.hpp"

namespace newtonlab {

/// JSON document with fields: problem, mode, tau or t (mode dependent),
/// iterates, steps, residual_norms, update_norms, status.
std::string trace_to_json(const SolveTrace& trace, const std::string& problem_id,
                          const SolverConfig& cfg, int indent = 2);

/// Same schema with mode "flow"; steps are replaced by the uniform dt and
/// the time stamps.
std::string trajectory_to_json(const FlowTrajectory& traj, const std::string& problem_id,
                               int indent = 2);

}  // namespace newtonlab
