#ifndef FTCONSENSUS_H
#define FTCONSENSUS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FtcStatus {
  FTC_STATUS_OK = 0,
  FTC_STATUS_NULL_POINTER = 1,
  FTC_STATUS_INVALID_ARGUMENT = 2,
  FTC_STATUS_PARSE = 3,
  FTC_STATUS_BUFFER_TOO_SMALL = 4,
  FTC_STATUS_DIVERGED = 5,
  FTC_STATUS_NOT_CONVERGED = 6,
  FTC_STATUS_PANIC = 7,
} FtcStatus;

/**
 * Communication graph.
 */
typedef struct FtcGraph FtcGraph;

/**
 * Validated scenario.
 */
typedef struct FtcScenario FtcScenario;

/**
 * Result of [`ftc_simulate`].
 */
typedef struct FtcTrajectory FtcTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *ftc_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ftc_string_free(char *s);

/**
 * Builds a graph from a row-major `n x n` weight matrix; `weights[i*n+j] > 0`
 * means agent `i` hears agent `j`.
 *
 * # Safety
 * `weights` must point to `n*n` doubles; `out` must be writable.
 */
enum FtcStatus ftc_graph_new(size_t n, const double *weights, struct FtcGraph **out);

/**
 * Parses `{"n": .., "weights": [[..]]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum FtcStatus ftc_graph_from_json(const char *json, struct FtcGraph **out);

/**
 * # Safety
 * `g` must come from this library and not have been freed. Null is ignored.
 */
void ftc_graph_free(struct FtcGraph *g);

/**
 * Agent count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
size_t ftc_graph_n(const struct FtcGraph *g);

/**
 * Writes the Laplacian row-major into `out` (`len >= n*n`).
 *
 * # Safety
 * `g` must be live; `out` must hold `len` doubles.
 */
enum FtcStatus ftc_graph_laplacian(const struct FtcGraph *g, double *out, size_t len);

/**
 * `lambda_2` of the Laplacian of an undirected graph.
 *
 * # Safety
 * `g` must be live; `out` must be writable.
 */
enum FtcStatus ftc_graph_algebraic_connectivity(const struct FtcGraph *g, double *out);

/**
 * Positive `w` with `w^T L = 0` and `sum(w) = 1`; strongly connected graphs
 * only.
 *
 * # Safety
 * `g` must be live; `out` must hold `len` doubles.
 */
enum FtcStatus ftc_graph_left_null_vector(const struct FtcGraph *g, double *out, size_t len);

/**
 * Structural and spectral report as JSON.
 *
 * # Safety
 * `g` must be live; `out` must be writable. Free the result with
 * [`ftc_string_free`].
 */
enum FtcStatus ftc_graph_analyze_json(const struct FtcGraph *g, char **out);

/**
 * Parses and validates a scenario document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum FtcStatus ftc_scenario_from_json(const char *json, struct FtcScenario **out);

/**
 * Looks up a built-in scenario by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum FtcStatus ftc_scenario_builtin(const char *name, struct FtcScenario **out);

/**
 * # Safety
 * `s` must come from this library and not have been freed. Null is ignored.
 */
void ftc_scenario_free(struct FtcScenario *s);

/**
 * Scenario document as JSON.
 *
 * # Safety
 * `s` must be live; `out` must be writable.
 */
enum FtcStatus ftc_scenario_to_json(const struct FtcScenario *s, char **out);

/**
 * Convergence-time bound report as JSON.
 *
 * # Safety
 * `s` must be live; `out` must be writable.
 */
enum FtcStatus ftc_scenario_bound_json(const struct FtcScenario *s, char **out);

/**
 * Integrates a scenario with its own integrator settings.
 *
 * # Safety
 * `s` must be live; `out` must be writable.
 */
enum FtcStatus ftc_simulate(const struct FtcScenario *s, struct FtcTrajectory **out);

/**
 * # Safety
 * `t` must come from this library and not have been freed. Null is ignored.
 */
void ftc_trajectory_free(struct FtcTrajectory *t);

/**
 * Number of recorded samples, or 0 for a null handle.
 *
 * # Safety
 * `t` must be a live handle or null.
 */
size_t ftc_trajectory_len(const struct FtcTrajectory *t);

/**
 * Agent count, or 0 for a null handle.
 *
 * # Safety
 * `t` must be a live handle or null.
 */
size_t ftc_trajectory_n(const struct FtcTrajectory *t);

/**
 * Sample times (`len >= ftc_trajectory_len`).
 *
 * # Safety
 * `t` must be live; `out` must hold `len` doubles.
 */
enum FtcStatus ftc_trajectory_times(const struct FtcTrajectory *t, double *out, size_t len);

/**
 * State at sample `k` (`len >= ftc_trajectory_n`).
 *
 * # Safety
 * `t` must be live; `out` must hold `len` doubles.
 */
enum FtcStatus ftc_trajectory_state(const struct FtcTrajectory *t,
                                    size_t k,
                                    double *out,
                                    size_t len);

/**
 * Detected convergence time; `FtcStatus::NotConverged` when the run ended
 * above the tolerance.
 *
 * # Safety
 * `t` must be live; `out` must be writable.
 */
enum FtcStatus ftc_trajectory_convergence_time(const struct FtcTrajectory *t, double *out);

/**
 * Trajectory as CSV (`t,x_1..x_n,disagreement,conserved`).
 *
 * # Safety
 * `t` must be live; `out` must be writable.
 */
enum FtcStatus ftc_trajectory_csv(const struct FtcTrajectory *t, char **out);

/**
 * Run summary as JSON.
 *
 * # Safety
 * `t` must be live; `out` must be writable.
 */
enum FtcStatus ftc_trajectory_diagnostics_json(const struct FtcTrajectory *t, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FTCONSENSUS_H */
