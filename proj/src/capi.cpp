#include "newtonlab.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "basin.hpp"
#include "export.hpp"
#include "registry.hpp"
#include "trace_json.hpp"

using namespace newtonlab;

struct nl_problem {
    std::shared_ptr<const ProblemInfo> info;
};

struct nl_trace {
    SolveTrace trace;
    SolverConfig config;
    std::string problem_id;
};

struct nl_trajectory {
    FlowTrajectory trajectory;
    std::string problem_id;
};

struct nl_basin {
    BasinGrid grid;
    std::shared_ptr<const ProblemInfo> info;
};

namespace {

thread_local std::string g_last_error;

nl_status fail(nl_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

/// Runs `fn` and maps C++ failures onto status codes.
template <typename Fn>
nl_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const UnknownProblemError& e) {
        return fail(NL_ERR_UNKNOWN_PROBLEM, e.what());
    } catch (const OutOfDomainError& e) {
        return fail(NL_ERR_OUT_OF_DOMAIN, e.what());
    } catch (const SingularMatrixError& e) {
        return fail(NL_ERR_SINGULAR, e.what());
    } catch (const NoConvergenceError& e) {
        return fail(NL_ERR_SINGULAR, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(NL_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(NL_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(NL_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(NL_ERR_INTERNAL, "unknown failure");
    }
}

SolverConfig to_solver_config(const nl_solver_config* cfg, const SolverConfig& defaults) {
    SolverConfig out = defaults;
    if (cfg == nullptr) return out;
    switch (cfg->mode) {
        case NL_MODE_CLASSICAL: out.mode = StepMode::Classical; break;
        case NL_MODE_FIXED: out.mode = StepMode::Fixed; break;
        case NL_MODE_ADAPTIVE: out.mode = StepMode::Adaptive; break;
        default: throw std::invalid_argument("unknown solver mode");
    }
    if (cfg->mode == NL_MODE_FIXED) out.fixed_step = cfg->fixed_step;
    if (cfg->mode == NL_MODE_ADAPTIVE) out.tau = cfg->tau;
    if (cfg->max_iters > 0) out.max_iters = cfg->max_iters;
    if (cfg->update_tol > 0.0) out.update_tol = cfg->update_tol;
    if (cfg->blowup_norm > 0.0) out.blowup_norm = cfg->blowup_norm;
    out.validate();
    return out;
}

FlowConfig to_flow_config(const nl_flow_config* cfg, const FlowConfig& defaults) {
    FlowConfig out = defaults;
    if (cfg == nullptr) return out;
    if (cfg->dt > 0.0) out.dt = cfg->dt;
    if (cfg->t_max > 0.0) out.t_max = cfg->t_max;
    if (cfg->residual_stop > 0.0) out.residual_stop = cfg->residual_stop;
    return out;
}

nl_status check_state(const nl_problem* p, const double* x, int dim) {
    if (p == nullptr || x == nullptr) {
        return fail(NL_ERR_INVALID_ARGUMENT, "null argument");
    }
    if (dim != p->info->problem.dim) {
        return fail(NL_ERR_INVALID_ARGUMENT, "state dimension does not match the problem");
    }
    return NL_OK;
}

nl_status write_text_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) return fail(NL_ERR_IO, "cannot open '" + path + "' for writing");
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!file) return fail(NL_ERR_IO, "write to '" + path + "' failed");
    return NL_OK;
}

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* nl_version(void) { return "0.1.0"; }

const char* nl_last_error_message(void) { return g_last_error.c_str(); }

void nl_string_free(char* s) { std::free(s); }

nl_status nl_problem_create(const char* id, nl_problem** out) {
    if (id == nullptr || out == nullptr) return fail(NL_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto handle = std::make_unique<nl_problem>();
        handle->info = make_problem(id);
        *out = handle.release();
        return NL_OK;
    });
}

void nl_problem_destroy(nl_problem* p) { delete p; }

int nl_problem_dim(const nl_problem* p) { return p == nullptr ? 0 : p->info->problem.dim; }

const char* nl_problem_id(const nl_problem* p) {
    return p == nullptr ? "" : p->info->id.c_str();
}

int nl_problem_label_count(const nl_problem* p) {
    return p == nullptr ? 0 : static_cast<int>(p->info->labels.size());
}

const char* nl_problem_label_name(const nl_problem* p, int label) {
    if (p == nullptr || label < 0 || label >= static_cast<int>(p->info->labels.size())) {
        return "";
    }
    return p->info->labels[static_cast<size_t>(label)].c_str();
}

nl_status nl_problem_defaults(const nl_problem* p, nl_solver_config* solver,
                              nl_flow_config* oracle, double rect[4], int desk_res[2],
                              int paper_res[2]) {
    if (p == nullptr) return fail(NL_ERR_INVALID_ARGUMENT, "null problem");
    const ProblemInfo& info = *p->info;
    if (solver != nullptr) {
        solver->mode = NL_MODE_CLASSICAL;
        solver->fixed_step = 1.0;
        solver->tau = 0.1;
        solver->max_iters = info.default_solver.max_iters;
        solver->update_tol = info.default_solver.update_tol;
        solver->blowup_norm = info.default_solver.blowup_norm;
    }
    if (oracle != nullptr) {
        oracle->dt = info.default_oracle.dt;
        oracle->t_max = info.default_oracle.t_max;
        oracle->residual_stop = info.default_oracle.residual_stop;
    }
    if (rect != nullptr) {
        for (int i = 0; i < 4; ++i) rect[i] = info.default_rect[i];
    }
    if (desk_res != nullptr) {
        desk_res[0] = info.desk_resolution[0];
        desk_res[1] = info.desk_resolution[1];
    }
    if (paper_res != nullptr) {
        paper_res[0] = info.paper_resolution[0];
        paper_res[1] = info.paper_resolution[1];
    }
    return NL_OK;
}

nl_status nl_problem_guess(const nl_problem* p, double s, double t, double* x0) {
    if (p == nullptr || x0 == nullptr) return fail(NL_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const Vector x = p->info->guess_chart(s, t);
        std::copy(x.begin(), x.end(), x0);
        return NL_OK;
    });
}

nl_status nl_classify_state(const nl_problem* p, const double* x, int dim, int* label) {
    const nl_status rc = check_state(p, x, dim);
    if (rc != NL_OK) return rc;
    if (label == nullptr) return fail(NL_ERR_INVALID_ARGUMENT, "null label output");
    return guarded([&] {
        const Vector state(x, x + dim);
        *label = p->info->classify(state);
        return NL_OK;
    });
}

nl_status nl_solve(const nl_problem* p, const double* x0, int dim, const nl_solver_config* cfg,
                   nl_trace** out) {
    const nl_status rc = check_state(p, x0, dim);
    if (rc != NL_OK) return rc;
    if (out == nullptr) return fail(NL_ERR_INVALID_ARGUMENT, "null output");
    return guarded([&] {
        auto handle = std::make_unique<nl_trace>();
        handle->config = to_solver_config(cfg, p->info->default_solver);
        handle->problem_id = p->info->id;
        handle->trace = solve(p->info->problem, Vector(x0, x0 + dim), handle->config);
        *out = handle.release();
        return NL_OK;
    });
}

void nl_trace_destroy(nl_trace* t) { delete t; }

int nl_trace_iterations(const nl_trace* t) { return t == nullptr ? 0 : t->trace.iterations(); }

const char* nl_trace_status(const nl_trace* t) {
    return t == nullptr ? "" : to_string(t->trace.status);
}

int nl_trace_state_count(const nl_trace* t) {
    return t == nullptr ? 0 : static_cast<int>(t->trace.iterates.size());
}

nl_status nl_trace_get_state(const nl_trace* t, int index, double* x, int dim) {
    if (t == nullptr || x == nullptr) return fail(NL_ERR_INVALID_ARGUMENT, "null argument");
    if (index < 0 || index >= static_cast<int>(t->trace.iterates.size())) {
        return fail(NL_ERR_INVALID_ARGUMENT, "state index out of range");
    }
    const Vector& state = t->trace.iterates[static_cast<size_t>(index)];
    if (dim != static_cast<int>(state.size())) {
        return fail(NL_ERR_INVALID_ARGUMENT, "state dimension does not match");
    }
    std::copy(state.begin(), state.end(), x);
    return NL_OK;
}

nl_status nl_trace_to_json(const nl_trace* t, char** out) {
    if (t == nullptr || out == nullptr) return fail(NL_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = duplicate(trace_to_json(t->trace, t->problem_id, t->config));
        return *out != nullptr ? NL_OK : fail(NL_ERR_INTERNAL, "allocation failed");
    });
}

nl_status nl_flow_run(const nl_problem* p, const double* x0, int dim, const nl_flow_config* cfg,
                      nl_trajectory** out) {
    const nl_status rc = check_state(p, x0, dim);
    if (rc != NL_OK) return rc;
    if (out == nullptr) return fail(NL_ERR_INVALID_ARGUMENT, "null output");
    return guarded([&] {
        auto handle = std::make_unique<nl_trajectory>();
        handle->problem_id = p->info->id;
        handle->trajectory = flow(p->info->problem, Vector(x0, x0 + dim),
                                  to_flow_config(cfg, p->info->default_oracle));
        *out = handle.release();
        return NL_OK;
    });
}

void nl_trajectory_destroy(nl_trajectory* t) { delete t; }

int nl_trajectory_state_count(const nl_trajectory* t) {
    return t == nullptr ? 0 : static_cast<int>(t->trajectory.states.size());
}

const char* nl_trajectory_status(const nl_trajectory* t) {
    return t == nullptr ? "" : to_string(t->trajectory.status);
}

nl_status nl_trajectory_to_json(const nl_trajectory* t, char** out) {
    if (t == nullptr || out == nullptr) return fail(NL_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = duplicate(trajectory_to_json(t->trajectory, t->problem_id));
        return *out != nullptr ? NL_OK : fail(NL_ERR_INTERNAL, "allocation failed");
    });
}

nl_status nl_basin_run(const nl_problem* p, const nl_basin_plan* plan, nl_basin** out) {
    if (p == nullptr || plan == nullptr || out == nullptr) {
        return fail(NL_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        SamplingPlan sampling;
        sampling.rect = {plan->rect[0], plan->rect[1], plan->rect[2], plan->rect[3]};
        sampling.nx = plan->nx > 0 ? plan->nx : p->info->desk_resolution[0];
        sampling.ny = plan->ny > 0 ? plan->ny : p->info->desk_resolution[1];
        sampling.solver = to_solver_config(&plan->solver, p->info->default_solver);
        sampling.oracle = to_flow_config(&plan->oracle, p->info->default_oracle);
        sampling.threads = plan->threads;

        auto handle = std::make_unique<nl_basin>();
        handle->info = p->info;
        handle->grid = sample_basin(*p->info, sampling);
        *out = handle.release();
        return NL_OK;
    });
}

void nl_basin_destroy(nl_basin* b) { delete b; }

nl_status nl_basin_stats_get(const nl_basin* b, nl_basin_stats* out) {
    if (b == nullptr || out == nullptr) return fail(NL_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const PerformanceTable table = aggregate(b->grid);
        out->avg_iterations = table.avg_iterations;
        out->avg_step_size = table.avg_step_size;
        out->pct_convergent = table.pct_convergent;
        out->avg_rate = table.avg_rate;
        out->pct_converged_any = table.pct_converged_any;
        out->cells_total = table.cells_total;
        out->cells_oracle_defined = table.cells_oracle_defined;
        out->cells_convergent = table.cells_convergent;
        return NL_OK;
    });
}

nl_status nl_basin_write_ppm(const nl_basin* b, const char* path, int shade_by_iterations) {
    if (b == nullptr || path == nullptr) return fail(NL_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        return write_text_file(path, render_ppm(b->grid, *b->info, shade_by_iterations != 0));
    });
}

nl_status nl_basin_write_stats_csv(const nl_basin* b, const char* path) {
    if (b == nullptr || path == nullptr) return fail(NL_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { return write_text_file(path, stats_csv(aggregate(b->grid))); });
}

nl_status nl_export_direction_field(const nl_problem* p, const double rect[4], int nx, int ny,
                                    int kind, const char* path) {
    if (p == nullptr || rect == nullptr || path == nullptr) {
        return fail(NL_ERR_INVALID_ARGUMENT, "null argument");
    }
    if (kind != 0 && kind != 1) return fail(NL_ERR_INVALID_ARGUMENT, "kind must be 0 or 1");
    return guarded([&] {
        const std::string csv =
            export_direction_field(*p->info, {rect[0], rect[1], rect[2], rect[3]}, nx, ny,
                                   kind == 0 ? FieldKind::Raw : FieldKind::Nrt);
        return write_text_file(path, csv);
    });
}

nl_status nl_export_comparison(const nl_problem* p, const double* x0, int dim, double tau,
                               const nl_flow_config* flow_cfg, const char* path) {
    const nl_status rc = check_state(p, x0, dim);
    if (rc != NL_OK) return rc;
    if (path == nullptr) return fail(NL_ERR_INVALID_ARGUMENT, "null path");
    if (!(tau > 0.0)) return fail(NL_ERR_INVALID_ARGUMENT, "tau must be positive");
    return guarded([&] {
        const std::string json = export_trajectory_comparison(
            *p->info, Vector(x0, x0 + dim), tau, to_flow_config(flow_cfg, p->info->default_oracle));
        return write_text_file(path, json);
    });
}

}  // extern "C"
