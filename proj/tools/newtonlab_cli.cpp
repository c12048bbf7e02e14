// newtonlab command-line driver. Talks to the library exclusively through
// the C API in newtonlab.h.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "newtonlab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RuntimeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(nl_status rc, const std::string& what) {
    if (rc == NL_OK) return;
    const std::string message = what + ": " + nl_last_error_message();
    if (rc == NL_ERR_INVALID_ARGUMENT || rc == NL_ERR_UNKNOWN_PROBLEM) {
        throw UsageError(message);
    }
    throw RuntimeFailure(message);
}

std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            size_t used = 0;
            values.push_back(std::stod(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw UsageError(flag + ": cannot parse number '" + part + "'");
        }
    }
    if (values.empty()) throw UsageError(flag + ": empty list");
    return values;
}

// classical | fixed:<t> | adaptive:<tau>
nl_solver_config parse_mode(const std::string& spec, const nl_solver_config& defaults) {
    nl_solver_config cfg = defaults;
    if (spec == "classical") {
        cfg.mode = NL_MODE_CLASSICAL;
        return cfg;
    }
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    if (colon == std::string::npos || colon + 1 == spec.size()) {
        throw UsageError("mode '" + spec + "' is not classical, fixed:<t>, or adaptive:<tau>");
    }
    double value = 0.0;
    try {
        size_t used = 0;
        value = std::stod(spec.substr(colon + 1), &used);
        if (used != spec.size() - colon - 1) throw std::invalid_argument(spec);
    } catch (const std::exception&) {
        throw UsageError("mode '" + spec + "': cannot parse the numeric part");
    }
    if (head == "fixed") {
        if (!(value > 0.0 && value <= 1.0)) {
            throw UsageError("fixed step size must lie in (0,1]");
        }
        cfg.mode = NL_MODE_FIXED;
        cfg.fixed_step = value;
        return cfg;
    }
    if (head == "adaptive") {
        if (!(value > 0.0)) throw UsageError("adaptive tolerance tau must be positive");
        cfg.mode = NL_MODE_ADAPTIVE;
        cfg.tau = value;
        return cfg;
    }
    throw UsageError("unknown mode '" + head + "'");
}

std::string mode_label(const nl_solver_config& cfg) {
    char buf[48];
    switch (cfg.mode) {
        case NL_MODE_CLASSICAL: return "classical";
        case NL_MODE_FIXED:
            std::snprintf(buf, sizeof(buf), "fixed:%g", cfg.fixed_step);
            return buf;
        case NL_MODE_ADAPTIVE:
            std::snprintf(buf, sizeof(buf), "adaptive:%g", cfg.tau);
            return buf;
    }
    return "?";
}

struct ProblemHandle {
    nl_problem* p = nullptr;
    explicit ProblemHandle(const std::string& id) {
        check(nl_problem_create(id.c_str(), &p), "problem '" + id + "'");
    }
    ~ProblemHandle() { nl_problem_destroy(p); }
    ProblemHandle(const ProblemHandle&) = delete;
    ProblemHandle& operator=(const ProblemHandle&) = delete;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!file) throw RuntimeFailure("cannot write '" + path + "'");
}

int default_threads() {
    if (const char* env = std::getenv("NEWTONLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 0;  // library picks hardware concurrency
}

// Shared state for the flag set most subcommands use.
struct CommonArgs {
    std::string problem;
    std::string mode = "classical";
    std::string rect_spec;
    std::string res_spec;
    std::string x0_spec;
    std::string guess_spec;
    std::string out_path;
    std::string stats_path;
    std::string modes_spec;
    double oracle_dt = 0.0;
    double oracle_t_max = 0.0;
    double oracle_residual_stop = 0.0;
    double dt = 0.0;
    double t_max = 0.0;
    double residual_stop = 0.0;
    double tau = 0.1;
    int max_iters = 0;
    double update_tol = 0.0;
    int threads = default_threads();
    bool paper_scale = false;
    bool shade = false;
};

std::vector<double> initial_state(const ProblemHandle& handle, const CommonArgs& args) {
    const int dim = nl_problem_dim(handle.p);
    std::vector<double> x0(static_cast<size_t>(dim), 0.0);
    if (!args.x0_spec.empty() && !args.guess_spec.empty()) {
        throw UsageError("give either --x0 or --guess, not both");
    }
    if (!args.x0_spec.empty()) {
        const auto values = parse_number_list(args.x0_spec, "--x0");
        if (static_cast<int>(values.size()) != dim) {
            throw UsageError("--x0 needs exactly " + std::to_string(dim) + " numbers");
        }
        return values;
    }
    if (!args.guess_spec.empty()) {
        const auto values = parse_number_list(args.guess_spec, "--guess");
        if (values.size() != 2) throw UsageError("--guess needs exactly two numbers s,t");
        check(nl_problem_guess(handle.p, values[0], values[1], x0.data()), "guess");
        return x0;
    }
    throw UsageError("an initial state is required (--x0 or --guess)");
}

nl_basin_plan build_plan(const ProblemHandle& handle, const CommonArgs& args,
                         const nl_solver_config& solver) {
    nl_solver_config solver_defaults{};
    nl_flow_config oracle_defaults{};
    double rect[4];
    int desk_res[2], paper_res[2];
    check(nl_problem_defaults(handle.p, &solver_defaults, &oracle_defaults, rect, desk_res,
                              paper_res),
          "defaults");

    nl_basin_plan plan{};
    for (int i = 0; i < 4; ++i) plan.rect[i] = rect[i];
    plan.nx = args.paper_scale ? paper_res[0] : desk_res[0];
    plan.ny = args.paper_scale ? paper_res[1] : desk_res[1];
    plan.solver = solver;
    plan.oracle = oracle_defaults;
    plan.threads = args.threads;

    if (!args.rect_spec.empty()) {
        const auto values = parse_number_list(args.rect_spec, "--rect");
        if (values.size() != 4) throw UsageError("--rect needs a,b,c,d");
        for (int i = 0; i < 4; ++i) plan.rect[i] = values[i];
    }
    if (!args.res_spec.empty()) {
        if (args.paper_scale) throw UsageError("--res and --paper-scale are exclusive");
        const auto values = parse_number_list(args.res_spec, "--res");
        if (values.size() != 2) throw UsageError("--res needs nx,ny");
        plan.nx = static_cast<int>(values[0]);
        plan.ny = static_cast<int>(values[1]);
        if (plan.nx < 2 || plan.ny < 2) throw UsageError("--res values must be at least 2");
    }
    if (args.oracle_dt > 0.0) plan.oracle.dt = args.oracle_dt;
    if (args.oracle_t_max > 0.0) plan.oracle.t_max = args.oracle_t_max;
    if (args.oracle_residual_stop > 0.0) plan.oracle.residual_stop = args.oracle_residual_stop;
    return plan;
}

nl_solver_config solver_from_args(const ProblemHandle& handle, const CommonArgs& args) {
    nl_solver_config defaults{};
    check(nl_problem_defaults(handle.p, &defaults, nullptr, nullptr, nullptr, nullptr),
          "defaults");
    nl_solver_config cfg = parse_mode(args.mode, defaults);
    if (args.max_iters > 0) cfg.max_iters = args.max_iters;
    if (args.update_tol > 0.0) cfg.update_tol = args.update_tol;
    return cfg;
}

int run_solve(const CommonArgs& args) {
    ProblemHandle handle(args.problem);
    const auto x0 = initial_state(handle, args);
    const nl_solver_config cfg = solver_from_args(handle, args);

    nl_trace* trace = nullptr;
    check(nl_solve(handle.p, x0.data(), static_cast<int>(x0.size()), &cfg, &trace), "solve");
    std::unique_ptr<nl_trace, decltype(&nl_trace_destroy)> guard(trace, nl_trace_destroy);

    const int dim = nl_problem_dim(handle.p);
    std::vector<double> final_state(static_cast<size_t>(dim));
    check(nl_trace_get_state(trace, nl_trace_state_count(trace) - 1, final_state.data(), dim),
          "trace");
    int label = -1;
    check(nl_classify_state(handle.p, final_state.data(), dim, &label), "classify");

    std::cout << "problem:    " << nl_problem_id(handle.p) << "\n"
              << "mode:       " << mode_label(cfg) << "\n"
              << "status:     " << nl_trace_status(trace) << "\n"
              << "iterations: " << nl_trace_iterations(trace) << "\n";
    if (dim <= 4) {
        std::cout << "final:      ";
        for (int i = 0; i < dim; ++i) std::cout << (i ? "," : "") << final_state[i];
        std::cout << "\n";
    }
    std::cout << "label:      " << (label >= 0 ? nl_problem_label_name(handle.p, label) : "none")
              << "\n";

    if (!args.out_path.empty()) {
        char* json = nullptr;
        check(nl_trace_to_json(trace, &json), "trace json");
        std::unique_ptr<char, decltype(&nl_string_free)> json_guard(json, nl_string_free);
        write_file(args.out_path, json);
    }
    return kExitOk;
}

int run_flow(const CommonArgs& args) {
    ProblemHandle handle(args.problem);
    const auto x0 = initial_state(handle, args);

    nl_flow_config cfg{};
    cfg.dt = args.dt;
    cfg.t_max = args.t_max;
    cfg.residual_stop = args.residual_stop;

    nl_trajectory* traj = nullptr;
    check(nl_flow_run(handle.p, x0.data(), static_cast<int>(x0.size()), &cfg, &traj), "flow");
    std::unique_ptr<nl_trajectory, decltype(&nl_trajectory_destroy)> guard(traj,
                                                                           nl_trajectory_destroy);

    std::cout << "problem: " << nl_problem_id(handle.p) << "\n"
              << "status:  " << nl_trajectory_status(traj) << "\n"
              << "states:  " << nl_trajectory_state_count(traj) << "\n";

    if (!args.out_path.empty()) {
        char* json = nullptr;
        check(nl_trajectory_to_json(traj, &json), "trajectory json");
        std::unique_ptr<char, decltype(&nl_string_free)> json_guard(json, nl_string_free);
        write_file(args.out_path, json);
    }
    return kExitOk;
}

int run_basin(const CommonArgs& args) {
    ProblemHandle handle(args.problem);
    const nl_solver_config solver = solver_from_args(handle, args);
    const nl_basin_plan plan = build_plan(handle, args, solver);

    nl_basin* basin = nullptr;
    check(nl_basin_run(handle.p, &plan, &basin), "basin");
    std::unique_ptr<nl_basin, decltype(&nl_basin_destroy)> guard(basin, nl_basin_destroy);

    if (!args.out_path.empty()) {
        check(nl_basin_write_ppm(basin, args.out_path.c_str(), args.shade ? 1 : 0), "image");
    }
    if (!args.stats_path.empty()) {
        check(nl_basin_write_stats_csv(basin, args.stats_path.c_str()), "stats");
    }

    nl_basin_stats stats{};
    check(nl_basin_stats_get(basin, &stats), "stats");
    std::printf("problem: %s  mode: %s  grid: %dx%d\n", nl_problem_id(handle.p),
                mode_label(solver).c_str(), plan.nx, plan.ny);
    std::printf("avg iterations      %10.4f\n", stats.avg_iterations);
    std::printf("avg step size       %10.4f\n", stats.avg_step_size);
    std::printf("%% convergent        %10.4f\n", stats.pct_convergent);
    std::printf("avg rate            %10.4f\n", stats.avg_rate);
    std::printf("(converged to any root: %.4f%%; reference defined on %ld of %ld cells)\n",
                stats.pct_converged_any, stats.cells_oracle_defined, stats.cells_total);
    return kExitOk;
}

int run_table(const CommonArgs& args) {
    ProblemHandle handle(args.problem);

    std::vector<nl_solver_config> modes;
    std::vector<std::string> names;
    {
        nl_solver_config defaults{};
        check(nl_problem_defaults(handle.p, &defaults, nullptr, nullptr, nullptr, nullptr),
              "defaults");
        std::stringstream ss(args.modes_spec);
        std::string part;
        while (std::getline(ss, part, ',')) {
            nl_solver_config cfg = parse_mode(part, defaults);
            if (args.max_iters > 0) cfg.max_iters = args.max_iters;
            if (args.update_tol > 0.0) cfg.update_tol = args.update_tol;
            modes.push_back(cfg);
            names.push_back(mode_label(cfg));
        }
        if (modes.empty()) throw UsageError("--modes: empty list");
    }

    std::vector<nl_basin_stats> stats(modes.size());
    for (size_t m = 0; m < modes.size(); ++m) {
        const nl_basin_plan plan = build_plan(handle, args, modes[m]);
        nl_basin* basin = nullptr;
        check(nl_basin_run(handle.p, &plan, &basin), "basin");
        std::unique_ptr<nl_basin, decltype(&nl_basin_destroy)> guard(basin, nl_basin_destroy);
        check(nl_basin_stats_get(basin, &stats[m]), "stats");
        if (!args.stats_path.empty()) {
            const std::string path = args.stats_path + "." + names[m] + ".csv";
            check(nl_basin_write_stats_csv(basin, path.c_str()), "stats");
        }
    }

    std::printf("%-24s", "");
    for (const auto& name : names) std::printf("%16s", name.c_str());
    std::printf("\n");
    auto row = [&](const char* title, auto getter) {
        std::printf("%-24s", title);
        for (const auto& s : stats) std::printf("%16.4f", getter(s));
        std::printf("\n");
    };
    row("avg iterations", [](const nl_basin_stats& s) { return s.avg_iterations; });
    row("avg step size", [](const nl_basin_stats& s) { return s.avg_step_size; });
    row("% convergent", [](const nl_basin_stats& s) { return s.pct_convergent; });
    row("avg rate", [](const nl_basin_stats& s) { return s.avg_rate; });
    row("(% converged any)", [](const nl_basin_stats& s) { return s.pct_converged_any; });
    return kExitOk;
}

int run_field(const CommonArgs& args, const std::string& kind) {
    ProblemHandle handle(args.problem);
    if (kind != "raw" && kind != "nrt") throw UsageError("--kind must be raw or nrt");
    if (args.out_path.empty()) throw UsageError("--out is required");

    double rect[4];
    int desk_res[2];
    check(nl_problem_defaults(handle.p, nullptr, nullptr, rect, desk_res, nullptr), "defaults");
    int nx = 25, ny = 25;
    if (!args.rect_spec.empty()) {
        const auto values = parse_number_list(args.rect_spec, "--rect");
        if (values.size() != 4) throw UsageError("--rect needs a,b,c,d");
        for (int i = 0; i < 4; ++i) rect[i] = values[i];
    }
    if (!args.res_spec.empty()) {
        const auto values = parse_number_list(args.res_spec, "--res");
        if (values.size() != 2) throw UsageError("--res needs nx,ny");
        nx = static_cast<int>(values[0]);
        ny = static_cast<int>(values[1]);
    }
    check(nl_export_direction_field(handle.p, rect, nx, ny, kind == "raw" ? 0 : 1,
                                    args.out_path.c_str()),
          "field");
    return kExitOk;
}

int run_compare(const CommonArgs& args) {
    ProblemHandle handle(args.problem);
    const auto x0 = initial_state(handle, args);
    if (args.out_path.empty()) throw UsageError("--out is required");
    if (!(args.tau > 0.0)) throw UsageError("--tau must be positive");

    nl_flow_config cfg{};
    cfg.dt = args.dt;
    cfg.t_max = args.t_max;
    cfg.residual_stop = args.residual_stop;
    check(nl_export_comparison(handle.p, x0.data(), static_cast<int>(x0.size()), args.tau, &cfg,
                               args.out_path.c_str()),
          "compare");
    std::cout << "wrote " << args.out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive-step Newton laboratory (basins of attraction, reference flow, "
                 "performance tables)"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::simple);

    CommonArgs args;
    std::string field_kind = "nrt";

    auto add_problem_flag = [&](CLI::App* cmd) {
        cmd->add_option("--problem", args.problem,
                        "problem id: cubic | expsin | cubic-bvp[:n=<n>] | bratu[:n=<n>] | "
                        "cubic-pde[:n=<n>][:slice=<j>]")
            ->required();
    };
    auto add_start_flags = [&](CLI::App* cmd) {
        cmd->add_option("--x0", args.x0_spec, "initial state, comma separated");
        cmd->add_option("--guess", args.guess_spec,
                        "chart coordinates s,t (position, amplitude for the BVPs)");
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "run one Newton iteration history");
    add_problem_flag(solve_cmd);
    add_start_flags(solve_cmd);
    solve_cmd->add_option("--mode", args.mode, "classical | fixed:<t> | adaptive:<tau>");
    solve_cmd->add_option("--max-iters", args.max_iters, "iteration budget");
    solve_cmd->add_option("--update-tol", args.update_tol, "convergence threshold");
    solve_cmd->add_option("--out", args.out_path, "write the trace as JSON");

    CLI::App* flow_cmd = app.add_subcommand("flow", "integrate the reference Newton flow");
    add_problem_flag(flow_cmd);
    add_start_flags(flow_cmd);
    flow_cmd->add_option("--dt", args.dt, "Euler step size");
    flow_cmd->add_option("--t-max", args.t_max, "time horizon");
    flow_cmd->add_option("--residual-stop", args.residual_stop, "residual stopping threshold");
    flow_cmd->add_option("--out", args.out_path, "write the trajectory as JSON");

    CLI::App* basin_cmd = app.add_subcommand("basin", "sample a basin-of-attraction grid");
    add_problem_flag(basin_cmd);
    basin_cmd->add_option("--mode", args.mode, "classical | fixed:<t> | adaptive:<tau>");
    basin_cmd->add_option("--rect", args.rect_spec, "a,b,c,d sampling rectangle");
    basin_cmd->add_option("--res", args.res_spec, "nx,ny grid resolution");
    basin_cmd->add_option("--max-iters", args.max_iters, "iteration budget per cell");
    basin_cmd->add_option("--update-tol", args.update_tol, "convergence threshold");
    basin_cmd->add_option("--oracle-dt", args.oracle_dt, "reference flow step size");
    basin_cmd->add_option("--oracle-t-max", args.oracle_t_max, "reference flow horizon");
    basin_cmd->add_option("--oracle-residual-stop", args.oracle_residual_stop,
                          "reference flow residual threshold");
    basin_cmd->add_option("--threads", args.threads,
                          "worker threads (default: NEWTONLAB_THREADS or all cores)");
    basin_cmd->add_flag("--paper-scale", args.paper_scale, "full-resolution sampling grid");
    basin_cmd->add_flag("--shade", args.shade, "modulate brightness by iteration count");
    basin_cmd->add_option("--out", args.out_path, "write the basin image (binary PPM)");
    basin_cmd->add_option("--stats", args.stats_path, "write the statistics CSV");

    CLI::App* table_cmd =
        app.add_subcommand("table", "print the performance table for several modes");
    add_problem_flag(table_cmd);
    table_cmd->add_option("--modes", args.modes_spec, "comma list of mode specs")
        ->default_val("classical,adaptive:0.1");
    table_cmd->add_option("--rect", args.rect_spec, "a,b,c,d sampling rectangle");
    table_cmd->add_option("--res", args.res_spec, "nx,ny grid resolution");
    table_cmd->add_option("--max-iters", args.max_iters, "iteration budget per cell");
    table_cmd->add_option("--update-tol", args.update_tol, "convergence threshold");
    table_cmd->add_option("--oracle-dt", args.oracle_dt, "reference flow step size");
    table_cmd->add_option("--oracle-t-max", args.oracle_t_max, "reference flow horizon");
    table_cmd->add_option("--oracle-residual-stop", args.oracle_residual_stop,
                          "reference flow residual threshold");
    table_cmd->add_option("--threads", args.threads, "worker threads");
    table_cmd->add_flag("--paper-scale", args.paper_scale, "full-resolution sampling grid");
    table_cmd->add_option("--stats", args.stats_path, "stats CSV path prefix (one per mode)");

    CLI::App* field_cmd = app.add_subcommand("field", "export a direction field as CSV");
    add_problem_flag(field_cmd);
    field_cmd->add_option("--kind", field_kind, "raw | nrt");
    field_cmd->add_option("--rect", args.rect_spec, "a,b,c,d sampling rectangle");
    field_cmd->add_option("--res", args.res_spec, "nx,ny sampling resolution");
    field_cmd->add_option("--out", args.out_path, "output CSV path");

    CLI::App* compare_cmd = app.add_subcommand(
        "compare", "bundle classical, adaptive, and reference-flow runs from one start");
    add_problem_flag(compare_cmd);
    add_start_flags(compare_cmd);
    compare_cmd->add_option("--tau", args.tau, "adaptive tolerance")->default_val(0.1);
    compare_cmd->add_option("--dt", args.dt, "reference flow step size");
    compare_cmd->add_option("--t-max", args.t_max, "reference flow horizon");
    compare_cmd->add_option("--residual-stop", args.residual_stop, "reference flow threshold");
    compare_cmd->add_option("--out", args.out_path, "output JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (solve_cmd->parsed()) return run_solve(args);
        if (flow_cmd->parsed()) return run_flow(args);
        if (basin_cmd->parsed()) return run_basin(args);
        if (table_cmd->parsed()) return run_table(args);
        if (field_cmd->parsed()) return run_field(args, field_kind);
        if (compare_cmd->parsed()) return run_compare(args);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
