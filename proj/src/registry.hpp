#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>

#include "problem.hpp"
#include "solver.hpp"

namespace newtonlab {

class UnknownProblemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything the lab needs to drive one benchmark problem: the system
/// itself, the 2-parameter initial-guess chart used for basin sampling, the
/// root classifier, and desk/paper-scale defaults.
struct ProblemInfo {
    std::string id;      // canonical id, e.g. "cubic-bvp:n=100"
    std::string family;  // "cubic", "expsin", "cubic-bvp", "bratu", "cubic-pde"

    NonlinearProblem problem;

    /// Maps chart coordinates (s, t) to an initial state. Identity for the
    /// algebraic problems; (node position, amplitude) -> hat function for
    /// the 1-D problems; (hill position, amplitude) at a fixed slice for
    /// the 2-D problem.
    std::function<Vector(double s, double t)> guess_chart;

    /// Label index of the root/solution a state represents, or -1.
    std::function<int(const Vector& x)> classify;

    std::vector<std::string> labels;

    /// Error measure used for the empirical rate fit: distance to the
    /// catalog root for algebraic problems, nearest-integral-target
    /// deviation for the discretized problems.
    std::function<double(const Vector& x, int oracle_label)> rate_error;

    /// Root markers in chart coordinates (algebraic problems only).
    std::vector<std::array<double, 2>> chart_roots;

    SolverConfig default_solver;
    FlowConfig default_oracle;
    std::array<double, 4> default_rect{};  // a, b (s-axis), c, d (t-axis)
    std::array<int, 2> desk_resolution{};
    std::array<int, 2> paper_resolution{};

    /// For the 1-D problems a correct cell must additionally end within
    /// oracle_distance_tol (problem norm) of the reference flow endpoint.
    bool check_oracle_distance = false;
    double oracle_distance_tol = 1e-3;
};

/// Builds the problem for an id of the form
///   cubic | expsin | cubic-bvp[:n=<n>] | bratu[:n=<n>] |
///   cubic-pde[:n=<n>][:slice=<j>]
/// Defaults: n=100 for the 1-D problems, n=32 and slice=n/2 for the 2-D one.
/// Throws UnknownProblemError for anything else.
std::shared_ptr<const ProblemInfo> make_problem(const std::string& id);

}  // namespace newtonlab
