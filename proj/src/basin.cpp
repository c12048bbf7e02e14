#include "basin.hpp"

#include <cmath>
#include <cstdio>
#include <thread>

namespace newtonlab {

void SamplingPlan::validate() const {
    if (nx < 2 || ny < 2) throw std::invalid_argument("plan resolution must be at least 2x2");
    if (!(rect[0] < rect[1]) || !(rect[2] < rect[3])) {
        throw std::invalid_argument("plan rectangle is degenerate");
    }
    solver.validate();
}

namespace {

constexpr double kErrorFloor = 1e-14;

/// Fills the records of one cell (one per mode) from scratch.
void run_cell(const ProblemInfo& info, const SamplingPlan& plan,
              std::span<const SolverConfig> modes, double s, double t,
              std::span<CellRecord*> records) {
    const Vector x0 = info.guess_chart(s, t);

    if (!info.problem.in_domain(x0)) {
        for (CellRecord* r : records) r->status = SolveStatus::LeftDomain;
        return;
    }

    // Reference flow; shared by all modes since it depends on the cell only.
    const FlowEndpoint oracle = flow_endpoint(info.problem, x0, plan.oracle);
    int oracle_label = -1;
    bool oracle_defined = false;
    if (oracle.reached_residual_stop()) {
        oracle_label = info.classify(oracle.state);
        oracle_defined = oracle_label >= 0;
    }

    for (size_t m = 0; m < modes.size(); ++m) {
        CellRecord& rec = *records[m];
        rec.oracle_label = oracle_label;
        rec.oracle_defined = oracle_defined;

        const SolveTrace trace = solve(info.problem, x0, modes[m]);
        rec.status = trace.status;
        rec.iterations = trace.iterations();
        rec.final_step = trace.steps.empty() ? 0.0 : trace.steps.back();
        rec.steps_count = static_cast<int>(trace.steps.size());
        rec.steps_sum = 0.0;
        for (double step : trace.steps) rec.steps_sum += step;

        if (trace.status == SolveStatus::Converged) {
            rec.label = info.classify(trace.final_state());
        }

        rec.correct = oracle_defined && trace.status == SolveStatus::Converged &&
                      rec.label >= 0 && rec.label == oracle_label;
        if (rec.correct && info.check_oracle_distance) {
            Vector diff = trace.final_state();
            for (size_t i = 0; i < diff.size(); ++i) diff[i] -= oracle.state[i];
            rec.correct = info.problem.norm(diff) <= info.oracle_distance_tol;
        }

        if (rec.correct) {
            rec.errors.reserve(trace.iterates.size());
            for (const Vector& x : trace.iterates) {
                rec.errors.push_back(info.rate_error(x, oracle_label));
            }
        }
    }
}

}  // namespace

std::vector<BasinGrid> sample_basin_multi(const ProblemInfo& info, const SamplingPlan& plan,
                                          std::span<const SolverConfig> modes) {
    plan.validate();
    for (const SolverConfig& cfg : modes) cfg.validate();
    if (modes.empty()) throw std::invalid_argument("no solver configs given");

    const size_t cell_count = static_cast<size_t>(plan.nx) * plan.ny;
    std::vector<BasinGrid> grids(modes.size());
    for (size_t m = 0; m < modes.size(); ++m) {
        grids[m].problem_id = info.id;
        grids[m].plan = plan;
        grids[m].plan.solver = modes[m];
        grids[m].cells.assign(cell_count, CellRecord{});
    }

    int threads = plan.threads;
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) threads = 1;
    }
    threads = static_cast<int>(std::min<size_t>(threads, cell_count));

    // Cells are pre-assigned by stride; every thread writes only its own
    // slots, so the result does not depend on the schedule.
    auto worker = [&](int first) {
        std::vector<CellRecord*> records(modes.size());
        for (size_t idx = first; idx < cell_count; idx += threads) {
            const int ix = static_cast<int>(idx) % plan.nx;
            const int iy = static_cast<int>(idx) / plan.nx;
            const double s = cell_coordinate(plan.rect[0], plan.rect[1], ix, plan.nx);
            const double t = cell_coordinate(plan.rect[2], plan.rect[3], iy, plan.ny);
            for (size_t m = 0; m < modes.size(); ++m) records[m] = &grids[m].cells[idx];
            run_cell(info, plan, modes, s, t, records);
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int k = 0; k < threads; ++k) pool.emplace_back(worker, k);
        for (std::thread& th : pool) th.join();
    }
    return grids;
}

BasinGrid sample_basin(const ProblemInfo& info, const SamplingPlan& plan) {
    return std::move(sample_basin_multi(info, plan, {&plan.solver, 1}).front());
}

std::optional<RateFit> estimate_rate(std::span<const double> errors) {
    // Drop trailing errors at machine-zero level before taking logs.
    size_t usable = errors.size();
    while (usable > 0 && errors[usable - 1] < kErrorFloor) --usable;
    if (usable < 3) return std::nullopt;
    for (size_t i = 0; i < usable; ++i) {
        if (!(errors[i] > 0.0)) return std::nullopt;
    }

    // Pairs (ln e_{n-1}, ln e_n).
    const size_t pairs = usable - 1;
    double mean_x = 0.0, mean_y = 0.0;
    for (size_t i = 0; i < pairs; ++i) {
        mean_x += std::log(errors[i]);
        mean_y += std::log(errors[i + 1]);
    }
    mean_x /= pairs;
    mean_y /= pairs;

    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < pairs; ++i) {
        const double dx = std::log(errors[i]) - mean_x;
        const double dy = std::log(errors[i + 1]) - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    if (sxx < 1e-12) return std::nullopt;  // degenerate regressor

    RateFit fit;
    fit.rho = sxy / sxx;
    fit.intercept = mean_y - fit.rho * mean_x;
    return fit;
}

PerformanceTable aggregate(const BasinGrid& grid) {
    PerformanceTable table;
    table.cells_total = static_cast<long>(grid.cells.size());

    long iter_sum = 0;
    double steps_sum = 0.0;
    long steps_count = 0;
    double rate_sum = 0.0;
    long converged_any = 0;

    for (const CellRecord& rec : grid.cells) {
        if (rec.status == SolveStatus::Converged && rec.label >= 0) ++converged_any;
        if (rec.oracle_defined) ++table.cells_oracle_defined;
        if (!rec.correct) continue;
        ++table.cells_convergent;
        iter_sum += rec.iterations;
        steps_sum += rec.steps_sum;
        steps_count += rec.steps_count;
        if (const auto fit = estimate_rate(rec.errors)) {
            rate_sum += fit->rho;
            ++table.cells_with_rate;
        }
    }

    if (table.cells_convergent > 0) {
        table.avg_iterations = static_cast<double>(iter_sum) / table.cells_convergent;
    }
    if (steps_count > 0) table.avg_step_size = steps_sum / steps_count;
    if (table.cells_oracle_defined > 0) {
        table.pct_convergent = 100.0 * table.cells_convergent / table.cells_oracle_defined;
    }
    if (table.cells_with_rate > 0) table.avg_rate = rate_sum / table.cells_with_rate;
    if (table.cells_total > 0) {
        table.pct_converged_any = 100.0 * converged_any / table.cells_total;
    }
    return table;
}

namespace {

struct Rgb {
    unsigned char r, g, b;
};

constexpr Rgb kPalette[] = {
    {215, 70, 60},    // label 0
    {80, 165, 85},    // label 1
    {70, 100, 215},   // label 2
    {235, 195, 60},   // label 3
    {160, 75, 200},   // label 4
    {75, 195, 210},   // label 5
    {230, 130, 50},   // label 6
    {140, 140, 140},  // label 7
};
constexpr Rgb kDivergentColor = {25, 25, 32};

}  // namespace

std::string render_ppm(const BasinGrid& grid, const ProblemInfo& info, bool shade_by_iterations) {
    const int nx = grid.nx();
    const int ny = grid.ny();

    char header[64];
    std::snprintf(header, sizeof(header), "P6\n%d %d\n255\n", nx, ny);
    std::string out(header);
    const size_t pixel_start = out.size();
    out.resize(pixel_start + static_cast<size_t>(nx) * ny * 3);

    const int max_iters = grid.plan.solver.max_iters;
    for (int row = 0; row < ny; ++row) {
        const int iy = ny - 1 - row;  // top row = largest t
        for (int ix = 0; ix < nx; ++ix) {
            const CellRecord& rec = grid.cell(ix, iy);
            Rgb c = kDivergentColor;
            if (rec.status == SolveStatus::Converged && rec.label >= 0) {
                c = kPalette[rec.label % (sizeof(kPalette) / sizeof(kPalette[0]))];
                if (shade_by_iterations) {
                    const double frac =
                        std::min(1.0, static_cast<double>(rec.iterations) / max_iters);
                    const double scale = 1.0 - 0.6 * frac;
                    c.r = static_cast<unsigned char>(c.r * scale);
                    c.g = static_cast<unsigned char>(c.g * scale);
                    c.b = static_cast<unsigned char>(c.b * scale);
                }
            }
            const size_t o = pixel_start + 3 * (static_cast<size_t>(row) * nx + ix);
            out[o] = static_cast<char>(c.r);
            out[o + 1] = static_cast<char>(c.g);
            out[o + 2] = static_cast<char>(c.b);
        }
    }

    // Root markers: a small white ring per catalogued root inside the rect.
    const auto& rect = grid.plan.rect;
    const int radius = std::max(2, std::min(nx, ny) / 70);
    for (const auto& root : info.chart_roots) {
        if (root[0] < rect[0] || root[0] > rect[1] || root[1] < rect[2] || root[1] > rect[3]) {
            continue;
        }
        const double fx = (root[0] - rect[0]) / (rect[1] - rect[0]) * (nx - 1);
        const double fy = (root[1] - rect[2]) / (rect[3] - rect[2]) * (ny - 1);
        const int cx = static_cast<int>(std::lround(fx));
        const int cy = ny - 1 - static_cast<int>(std::lround(fy));
        for (int dy = -radius - 1; dy <= radius + 1; ++dy) {
            for (int dx = -radius - 1; dx <= radius + 1; ++dx) {
                const int px = cx + dx;
                const int py = cy + dy;
                if (px < 0 || px >= nx || py < 0 || py >= ny) continue;
                const double dist = std::hypot(static_cast<double>(dx), static_cast<double>(dy));
                if (std::abs(dist - radius) > 0.6) continue;
                const size_t o = pixel_start + 3 * (static_cast<size_t>(py) * nx + px);
                out[o] = out[o + 1] = out[o + 2] = static_cast<char>(255);
            }
        }
    }
    return out;
}

std::string stats_csv(const PerformanceTable& table) {
    char line[256];
    std::snprintf(line, sizeof(line), "%.6f,%.6f,%.6f,%.6f\n", table.avg_iterations,
                  table.avg_step_size, table.pct_convergent, table.avg_rate);
    return std::string("avg_iterations,avg_step_size,pct_convergent,avg_rate\n") + line;
}

}  // namespace newtonlab
