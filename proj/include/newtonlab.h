/*
 * newtonlab C API.
 *
 * A shared-library interface over the adaptive Newton laboratory: benchmark
 * problems, classical/damped/adaptive Newton iteration, the reference Newton
 * flow, basin-of-attraction sampling, and the file exporters.
 *
 * Conventions:
 *   - every object is an opaque handle created by an nl_*_create/run call
 *     and released by the matching nl_*_destroy,
 *   - functions return nl_status; NL_OK is 0,
 *   - nl_last_error_message() describes the most recent failure on the
 *     calling thread,
 *   - strings returned through char** are heap-allocated; release them with
 *     nl_string_free.
 */

#ifndef NEWTONLAB_H
#define NEWTONLAB_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define NL_API __declspec(dllexport)
#else
#define NL_API __attribute__((visibility("default")))
#endif

typedef struct nl_problem nl_problem;
typedef struct nl_trace nl_trace;
typedef struct nl_trajectory nl_trajectory;
typedef struct nl_basin nl_basin;

typedef enum nl_status {
    NL_OK = 0,
    NL_ERR_INVALID_ARGUMENT = 1,
    NL_ERR_UNKNOWN_PROBLEM = 2,
    NL_ERR_SINGULAR = 3,
    NL_ERR_OUT_OF_DOMAIN = 4,
    NL_ERR_IO = 5,
    NL_ERR_INTERNAL = 6
} nl_status;

typedef enum nl_mode {
    NL_MODE_CLASSICAL = 0,
    NL_MODE_FIXED = 1,
    NL_MODE_ADAPTIVE = 2
} nl_mode;

typedef struct nl_solver_config {
    nl_mode mode;
    double fixed_step;  /* used by NL_MODE_FIXED; must lie in (0,1] */
    double tau;         /* used by NL_MODE_ADAPTIVE; must be positive */
    int max_iters;      /* <= 0 selects the problem default */
    double update_tol;  /* <= 0 selects the default 1e-8 */
    double blowup_norm; /* <= 0 selects the default 1e8 */
} nl_solver_config;

typedef struct nl_flow_config {
    double dt;            /* <= 0 selects the problem default */
    double t_max;         /* <= 0 selects the problem default */
    double residual_stop; /* <= 0 selects the problem default */
} nl_flow_config;

typedef struct nl_basin_plan {
    double rect[4]; /* a, b (first chart axis), c, d (second axis) */
    int nx, ny;     /* 0,0 selects the problem's desk-scale resolution */
    nl_solver_config solver;
    nl_flow_config oracle;
    int threads; /* <= 0: hardware concurrency */
} nl_basin_plan;

typedef struct nl_basin_stats {
    double avg_iterations;
    double avg_step_size;
    double pct_convergent;    /* correct cells / oracle-defined cells, % */
    double avg_rate;          /* mean fitted convergence rate */
    double pct_converged_any; /* converged-to-any-root cells / all cells, % */
    long cells_total;
    long cells_oracle_defined;
    long cells_convergent;
} nl_basin_stats;

NL_API const char* nl_version(void);

/* Thread-local message for the most recent failing call. */
NL_API const char* nl_last_error_message(void);

NL_API void nl_string_free(char* s);

/* ---- problems ------------------------------------------------------- */

/* Ids: cubic | expsin | cubic-bvp[:n=<n>] | bratu[:n=<n>]
 *      | cubic-pde[:n=<n>][:slice=<j>] */
NL_API nl_status nl_problem_create(const char* id, nl_problem** out);
NL_API void nl_problem_destroy(nl_problem* p);

NL_API int nl_problem_dim(const nl_problem* p);
NL_API const char* nl_problem_id(const nl_problem* p);
NL_API int nl_problem_label_count(const nl_problem* p);
NL_API const char* nl_problem_label_name(const nl_problem* p, int label);

/* Fills the problem's default settings into the structs. */
NL_API nl_status nl_problem_defaults(const nl_problem* p, nl_solver_config* solver,
                                     nl_flow_config* oracle, double rect[4], int desk_res[2],
                                     int paper_res[2]);

/* Maps chart coordinates (s, t) to an initial state of length
 * nl_problem_dim(p): the identity for the algebraic problems, a hat
 * function (node position, amplitude) for the 1-D problems, a hill
 * function (position, amplitude) for the 2-D problem. */
NL_API nl_status nl_problem_guess(const nl_problem* p, double s, double t, double* x0);

/* Label index of the root/solution the state represents, or -1. */
NL_API nl_status nl_classify_state(const nl_problem* p, const double* x, int dim, int* label);

/* ---- solving -------------------------------------------------------- */

NL_API nl_status nl_solve(const nl_problem* p, const double* x0, int dim,
                          const nl_solver_config* cfg, nl_trace** out);
NL_API void nl_trace_destroy(nl_trace* t);

NL_API int nl_trace_iterations(const nl_trace* t);
NL_API const char* nl_trace_status(const nl_trace* t);
NL_API int nl_trace_state_count(const nl_trace* t);
NL_API nl_status nl_trace_get_state(const nl_trace* t, int index, double* x, int dim);
NL_API nl_status nl_trace_to_json(const nl_trace* t, char** out);

NL_API nl_status nl_flow_run(const nl_problem* p, const double* x0, int dim,
                             const nl_flow_config* cfg, nl_trajectory** out);
NL_API void nl_trajectory_destroy(nl_trajectory* t);

NL_API int nl_trajectory_state_count(const nl_trajectory* t);
NL_API const char* nl_trajectory_status(const nl_trajectory* t);
NL_API nl_status nl_trajectory_to_json(const nl_trajectory* t, char** out);

/* ---- basin sampling -------------------------------------------------- */

NL_API nl_status nl_basin_run(const nl_problem* p, const nl_basin_plan* plan, nl_basin** out);
NL_API void nl_basin_destroy(nl_basin* b);

NL_API nl_status nl_basin_stats_get(const nl_basin* b, nl_basin_stats* out);
NL_API nl_status nl_basin_write_ppm(const nl_basin* b, const char* path, int shade_by_iterations);
NL_API nl_status nl_basin_write_stats_csv(const nl_basin* b, const char* path);

/* ---- exports ---------------------------------------------------------- */

/* kind: 0 = the raw operator field, 1 = the Newton direction field. */
NL_API nl_status nl_export_direction_field(const nl_problem* p, const double rect[4], int nx,
                                           int ny, int kind, const char* path);

/* Classical run, adaptive run with the given tau, and the reference flow
 * from the same start, bundled as one JSON document. */
NL_API nl_status nl_export_comparison(const nl_problem* p, const double* x0, int dim, double tau,
                                      const nl_flow_config* flow_cfg, const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NEWTONLAB_H */
