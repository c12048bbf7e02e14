#pragma once

#include <string>

#include "registry.hpp"

namespace newtonlab {

enum class FieldKind {
    Raw,  // the operator F itself
    Nrt,  // the Newton direction -F'^{-1} F
};

/// CSV of the sampled direction field over `rect` (inclusive endpoints):
/// header "x,y,vx,vy,magnitude,flag". (vx, vy) is unit length with the
/// original magnitude in its own column; fixed points carry a zero vector
/// with flag "fixed_point"; cells where the Jacobian solve fails emit empty
/// vector fields with flag "singular". Only 2-dimensional problems qualify.
std::string export_direction_field(const ProblemInfo& info, const std::array<double, 4>& rect,
                                   int nx, int ny, FieldKind kind);

/// JSON bundle of three runs from the same start: classical, adaptive with
/// the given tau, and the reference flow.
std::string export_trajectory_comparison(const ProblemInfo& info, const Vector& x0, double tau,
                                         const FlowConfig& flow_cfg);

}  // namespace newtonlab
