/* C interface of the drproj feasibility toolkit. */

#ifndef DRPROJ_H
#define DRPROJ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Classification outcomes.
typedef enum DrFixStatus {
  DrFixStatus_NotFixed = 0,
  DrFixStatus_Fixed = 1,
  DrFixStatus_StrongFixed = 2,
} DrFixStatus;

// Which point of a step record to read.
typedef enum DrPointKind {
  DrPointKind_Iterate = 0,
  DrPointKind_Shadow = 1,
  DrPointKind_ReflectedShadow = 2,
  DrPointKind_NextIterate = 3,
} DrPointKind;

// Status codes returned by every fallible call.
typedef enum DrStatus {
  DrStatus_Ok = 0,
  DrStatus_NullArgument = 1,
  DrStatus_ParseError = 2,
  DrStatus_NumericError = 3,
  DrStatus_InvalidArgument = 4,
  DrStatus_Utf8Error = 5,
  DrStatus_Panic = 6,
} DrStatus;

// An opaque feasibility problem: the pair of sets a scenario describes.
typedef struct DrProblem DrProblem;

// An opaque recorded trajectory.
typedef struct DrTrajectory DrTrajectory;

// Options for a run. `algorithm`: 0 = Douglas-Rachford, 1 = alternating
// projections. `policy`: 0 = lowest index, 1 = nearest, 2 = seeded random.
typedef struct DrRunOptions {
  int algorithm;
  int policy;
  uint64_t seed;
  size_t max_iter;
  double tol_step;
  size_t confirm_window;
} DrRunOptions;

// Diagnostics snapshot of a finished run. `cycle_period` is 0 when no cycle
// was detected; `converged` and `steps_vanish` are 0/1 flags.
typedef struct DrDiagnostics {
  int converged;
  size_t cycle_period;
  int steps_vanish;
  double tail_diameter;
  double feasibility_gap;
} DrDiagnostics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parse a scenario JSON document into a problem handle.
//
// # Safety
// `json` must be a valid NUL-terminated string and `out` a valid pointer.
enum DrStatus drproj_problem_from_json(const char *json, struct DrProblem **out);

// Construct a built-in scenario by name with default parameters.
//
// # Safety
// `name` must be a valid NUL-terminated string and `out` a valid pointer.
enum DrStatus drproj_problem_builtin(const char *name, struct DrProblem **out);

// Release a problem handle.
//
// # Safety
// `problem` must come from a `drproj_problem_*` constructor, not yet freed.
void drproj_problem_free(struct DrProblem *problem);

// Ambient dimension of the iteration space (0 on null input).
//
// # Safety
// `problem` must be a live problem handle or null.
size_t drproj_problem_dimension(const struct DrProblem *problem);

// Run the configured iteration from `x0` and return a trajectory handle.
//
// # Safety
// All pointers must be valid; `x0` must point to `dim` doubles.
enum DrStatus drproj_run(const struct DrProblem *problem,
                         const double *x0,
                         size_t dim,
                         const struct DrRunOptions *options,
                         struct DrTrajectory **out);

// Release a trajectory handle.
//
// # Safety
// `trajectory` must come from `drproj_run`, not yet freed.
void drproj_trajectory_free(struct DrTrajectory *trajectory);

// Number of recorded steps (0 on null input).
//
// # Safety
// `trajectory` must be a live trajectory handle or null.
size_t drproj_trajectory_len(const struct DrTrajectory *trajectory);

// Stop reason: 0 converged, 1 iteration cap, 2 cycle detected, -1 on null.
//
// # Safety
// `trajectory` must be a live trajectory handle or null.
int drproj_trajectory_stop_reason(const struct DrTrajectory *trajectory);

// Copy diagnostics of a finished run.
//
// # Safety
// Both pointers must be valid.
enum DrStatus drproj_trajectory_diagnostics(const struct DrTrajectory *trajectory,
                                            struct DrDiagnostics *out);

// Copy one point of a step record into `buf` (which holds `len >= dim`
// doubles).
//
// # Safety
// `trajectory` must be live and `buf` must point to at least `len` doubles.
enum DrStatus drproj_trajectory_point(const struct DrTrajectory *trajectory,
                                      size_t index,
                                      enum DrPointKind kind,
                                      double *buf,
                                      size_t len);

// Active pair chosen at a step.
//
// # Safety
// All pointers must be valid.
enum DrStatus drproj_trajectory_pair(const struct DrTrajectory *trajectory,
                                     size_t index,
                                     size_t *i_out,
                                     size_t *j_out);

// Classify a point under the step operator; also reports how many distinct
// image points the operator has there.
//
// # Safety
// All pointers must be valid; `point` must hold `dim` doubles.
enum DrStatus drproj_classify(const struct DrProblem *problem,
                              const double *point,
                              size_t dim,
                              enum DrFixStatus *status_out,
                              size_t *image_size_out);

// Certified lower bound on the radius of attraction (may be infinite).
// Fails unless the point is a strong fixed point.
//
// # Safety
// All pointers must be valid; `point` must hold `dim` doubles.
enum DrStatus drproj_radius_certified(const struct DrProblem *problem,
                                      const double *point,
                                      size_t dim,
                                      double *out);

// Sampled (probabilistic, one-sided) radius estimate.
//
// # Safety
// All pointers must be valid; `point` must hold `dim` doubles.
enum DrStatus drproj_radius_sampled(const struct DrProblem *problem,
                                    const double *point,
                                    size_t dim,
                                    double eps_hi,
                                    size_t samples,
                                    size_t bisection_steps,
                                    uint64_t seed,
                                    double *out);

// Name of the scenario backing a problem handle. Borrowed thread-local
// pointer, valid until the next call to this function on the same thread.
//
// # Safety
// `problem` must be a live problem handle or null.
const char *drproj_problem_name(const struct DrProblem *problem);

// Message describing the most recent error on this thread. Borrowed
// pointer, valid until the next failing call on the same thread.
const char *drproj_last_error_message(void);

// Crate version as a static string.
const char *drproj_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DRPROJ_H */
