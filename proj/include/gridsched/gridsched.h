#ifndef GRIDSCHED_GRIDSCHED_H
#define GRIDSCHED_GRIDSCHED_H

/* C interface to the scheduling library. Handles are opaque; every call that
 * can fail returns a gs_status and leaves a message in gs_last_error(), which
 * is per thread and valid until the next failing call on that thread. */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(GRIDSCHED_BUILDING_LIBRARY)
#    define GS_API __declspec(dllexport)
#  else
#    define GS_API __declspec(dllimport)
#  endif
#else
#  define GS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gs_status {
  GS_OK = 0,
  GS_ERR_IO,
  GS_ERR_PARSE,
  GS_ERR_SCHEMA,
  GS_ERR_VALIDATION,
  GS_ERR_INVALID_MODEL,
  GS_ERR_UNKNOWN_ROW,
  GS_ERR_DIMENSION,
  GS_ERR_PATTERN_LIMIT,
  GS_ERR_SOLVER,
  GS_ERR_ARGUMENT,
  GS_ERR_INTERNAL
} gs_status;

/* Branch-and-bound outcome of a solve. */
typedef enum gs_mip_status {
  GS_MIP_OPTIMAL = 0,
  GS_MIP_FEASIBLE,
  GS_MIP_INFEASIBLE,
  GS_MIP_GAP_LIMIT,
  GS_MIP_NODE_LIMIT,
  GS_MIP_TIME_LIMIT
} gs_mip_status;

typedef struct gs_instance gs_instance;
typedef struct gs_result gs_result;

GS_API const char* gs_version(void);
GS_API const char* gs_status_name(gs_status status);
GS_API const char* gs_last_error(void);

/* Findings (schema problems, validation violations or feasibility residuals)
 * attached to the last call on this thread that produced any. */
GS_API size_t gs_last_problem_count(void);
GS_API gs_status gs_last_problem(size_t i, const char** code, const char** message, const char** pointer);

GS_API gs_status gs_instance_read(const char* path, gs_instance** out);
GS_API gs_status gs_instance_parse(const char* json, size_t length, gs_instance** out);
GS_API gs_status gs_instance_write(const gs_instance* instance, const char* path);
GS_API void gs_instance_free(gs_instance* instance);

typedef struct gs_instance_shape {
  int buses, lines, conventional_units, renewable_units, consumers, pev_groups, charge_points, contingencies;
  int periods;
} gs_instance_shape;

GS_API gs_status gs_instance_get_shape(const gs_instance* instance, gs_instance_shape* out);

typedef struct gs_solve_options {
  int case_number; /* 1 no reserve (+ ex-post), 2 generators only, 3 generators and PEVs */
  double rel_gap;
  double abs_gap;
  long node_limit;
  double time_limit; /* seconds */
  int threads;       /* ex-post workers */
  long seed;         /* recorded only; the solver is deterministic */
  int per_consumer_freq_penalty;
  int literal_deployment_cost;
  int ex_post_pev_reserve;
  const gs_result* start; /* optional: reuse this result's commitment as a first incumbent */
} gs_solve_options;

GS_API void gs_solve_options_init(gs_solve_options* options);

/* Builds and solves one case. A result is returned whenever the search ran,
 * including infeasible and limit outcomes; inspect gs_result_info. */
GS_API gs_status gs_solve(const gs_instance* instance, const gs_solve_options* options, gs_result** out);

/* Loads a result bundle written by gs_result_write. */
GS_API gs_status gs_result_read(const gs_instance* instance, const char* dir, gs_result** out);

/* Re-runs the post-contingency evaluation on a result's schedule. */
GS_API gs_status gs_result_ex_post(const gs_instance* instance, const gs_result* result, int pev_reserve,
                                   int threads, gs_result** out);

typedef struct gs_run_info {
  int case_number;
  gs_mip_status status;
  const char* status_name;
  int has_incumbent;
  double objective;
  double best_bound;
  double gap;
  long nodes;
  double seconds;
  int rows;
  int columns;
} gs_run_info;

typedef struct gs_costs {
  double production, startup, shutdown, unserved, spill;
  double unserved_pr, frequency, pev_capacity, pev_deployment;
  double total;
} gs_costs;

GS_API gs_status gs_result_info(const gs_result* result, gs_run_info* out);
GS_API gs_status gs_result_costs(const gs_result* result, gs_costs* out);
GS_API gs_status gs_result_write(const gs_result* result, const gs_instance* instance, const char* dir);

/* Recomputes every equation of the result's case from the instance. Sets
 * *violations to the number of residuals above tolerance; details are
 * available through gs_last_problem. */
GS_API gs_status gs_result_check(const gs_result* result, const gs_instance* instance, double tolerance,
                                 size_t* violations);

/* One comparison.csv line (no newline); the pointer lives as long as result. */
GS_API const char* gs_comparison_header(void);
GS_API const char* gs_result_comparison_row(const gs_result* result);

GS_API void gs_result_free(gs_result* result);

GS_API gs_status gs_export_mps(const gs_instance* instance, const gs_solve_options* options, const char* path);

#ifdef __cplusplus
}
#endif

#endif
