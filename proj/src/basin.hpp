#pragma once

#include <optional>
#include <span>
#include <string>

#include "registry.hpp"

namespace newtonlab {

/// Rectangular sampling of the initial-guess chart with per-cell solver and
/// reference-flow settings. Endpoints are inclusive on both axes.
struct SamplingPlan {
    std::array<double, 4> rect{};  // a, b, c, d
    int nx = 2;
    int ny = 2;
    SolverConfig solver;
    FlowConfig oracle;
    int threads = 0;  // <= 0: hardware concurrency

    void validate() const;  // throws std::invalid_argument
};

/// Outcome of one sampled cell.
struct CellRecord {
    int label = -1;         // root reached by the iteration, -1 if none
    int oracle_label = -1;  // root the reference flow reaches
    SolveStatus status = SolveStatus::MaxIters;
    bool oracle_defined = false;
    bool correct = false;  // converged to the oracle's root
    int iterations = 0;
    double final_step = 0.0;
    double steps_sum = 0.0;
    int steps_count = 0;
    std::vector<double> errors;  // per-iterate error sequence of correct cells
};

struct BasinGrid {
    std::string problem_id;
    SamplingPlan plan;
    std::vector<CellRecord> cells;  // row-major, index iy * nx + ix

    int nx() const { return plan.nx; }
    int ny() const { return plan.ny; }
    const CellRecord& cell(int ix, int iy) const { return cells[size_t(iy) * plan.nx + ix]; }
};

/// Aggregate statistics over a basin grid. Percentages are 0..100.
/// pct_convergent counts cells that converged to the root the reference
/// flow identifies, over the cells where that reference is defined;
/// pct_converged_any counts convergence to any catalogued root over all
/// cells.
struct PerformanceTable {
    double avg_iterations = 0.0;
    double avg_step_size = 0.0;
    double pct_convergent = 0.0;
    double avg_rate = 0.0;
    double pct_converged_any = 0.0;
    long cells_total = 0;
    long cells_oracle_defined = 0;
    long cells_convergent = 0;
    long cells_with_rate = 0;
};

/// Chart coordinates of a cell (inclusive endpoints on both axes).
inline double cell_coordinate(double lo, double hi, int i, int count) {
    return (count <= 1) ? lo : lo + (hi - lo) * (static_cast<double>(i) / (count - 1));
}

/// Samples every cell: runs the reference flow once, then the solver for
/// each config in `modes`, and classifies both. Output is deterministic and
/// independent of the thread count. Returns one grid per mode.
std::vector<BasinGrid> sample_basin_multi(const ProblemInfo& info, const SamplingPlan& plan,
                                          std::span<const SolverConfig> modes);

/// Single-mode convenience wrapper (the mode comes from plan.solver).
BasinGrid sample_basin(const ProblemInfo& info, const SamplingPlan& plan);

struct RateFit {
    double rho = 0.0;        // slope of ln e_n against ln e_{n-1}
    double intercept = 0.0;  // the additive constant of the fit
};

/// Ordinary least squares of ln e_n against ln e_{n-1}. Trailing entries
/// below 1e-14 are dropped; nullopt (insufficient data) when fewer than
/// three usable errors remain or the regressor is degenerate.
std::optional<RateFit> estimate_rate(std::span<const double> errors);

PerformanceTable aggregate(const BasinGrid& grid);

/// Binary PPM (P6) image, one pixel per cell; row 0 is the top of the
/// parameter rectangle (t = d). Roots are drawn as small circles when the
/// problem has chart-space root markers inside the rectangle.
std::string render_ppm(const BasinGrid& grid, const ProblemInfo& info,
                       bool shade_by_iterations = false);

/// One header line and one data row.
std::string stats_csv(const PerformanceTable& table);

}  // namespace newtonlab
