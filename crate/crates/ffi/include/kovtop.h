#ifndef KOVTOP_H
#define KOVTOP_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KovtopStatus {
  KOVTOP_STATUS_OK = 0,
  KOVTOP_STATUS_NULL_POINTER = 1,
  KOVTOP_STATUS_INVALID_PARAMS = 2,
  KOVTOP_STATUS_INVALID_ORBIT = 3,
  KOVTOP_STATUS_DOMAIN = 4,
  KOVTOP_STATUS_ON_SEPARATING_SET = 5,
  KOVTOP_STATUS_SINGULAR_ENERGY = 6,
  KOVTOP_STATUS_EMPTY_SURFACE = 7,
  KOVTOP_STATUS_NO_MATCH = 8,
  KOVTOP_STATUS_DATA_INTEGRITY = 9,
  KOVTOP_STATUS_PRECONDITION = 10,
  KOVTOP_STATUS_BUFFER_TOO_SMALL = 11,
  KOVTOP_STATUS_OUT_OF_RANGE = 12,
  KOVTOP_STATUS_PANIC = 13,
} KovtopStatus;

/**
 * Bifurcation diagram of one orbit.
 */
typedef struct KovtopDiagram KovtopDiagram;

/**
 * Model parameters (kappa, c1).
 */
typedef struct KovtopModel KovtopModel;

/**
 * Singular point of a diagram. `family` is a NUL-terminated tag such as
 * "y3"; `has_z` tells whether `z` is meaningful.
 */
typedef struct KovtopPoint {
  char family[8];
  double h;
  double k;
  double z;
  bool has_z;
} KovtopPoint;

typedef struct KovtopVerifySummary {
  bool passed;
  size_t missing;
  size_t spurious;
  double max_mismatch;
} KovtopVerifySummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf`.
 *
 * # Safety
 * `buf` must hold `cap` writable bytes; `needed` must be writable.
 */
enum KovtopStatus kovtop_last_error(char *buf, size_t cap, size_t *needed);

/**
 * # Safety
 * `out` must be writable. The handle is freed with `kovtop_model_free`.
 */
enum KovtopStatus kovtop_model_new(double kappa, double c1, struct KovtopModel **out);

/**
 * # Safety
 * `model` must be null or come from `kovtop_model_new` and not be freed yet.
 */
void kovtop_model_free(struct KovtopModel *model);

/**
 * Subregion label of the orbit (a, b), e.g. "V.11" or "XII".
 *
 * # Safety
 * `model` must be a live handle; `buf` must hold `cap` bytes.
 */
enum KovtopStatus kovtop_classify(const struct KovtopModel *model,
                                  double a,
                                  double b,
                                  char *buf,
                                  size_t cap,
                                  size_t *needed);

/**
 * Code of the orbit as space-separated families and graph numbers.
 *
 * # Safety
 * As for `kovtop_classify`.
 */
enum KovtopStatus kovtop_code(const struct KovtopModel *model,
                              double a,
                              double b,
                              char *buf,
                              size_t cap,
                              size_t *needed);

/**
 * Graph number and Liouville class of the isoenergy surface at h.
 *
 * # Safety
 * `model` must be a live handle; `graph` and `class` must be writable.
 */
enum KovtopStatus kovtop_isoenergy(const struct KovtopModel *model,
                                   double a,
                                   double b,
                                   double h,
                                   uint8_t *graph,
                                   uint8_t *class_);

/**
 * # Safety
 * `model` must be a live handle; `out` must be writable. The diagram is
 * freed with `kovtop_diagram_free`.
 */
enum KovtopStatus kovtop_diagram_new(const struct KovtopModel *model,
                                     double a,
                                     double b,
                                     struct KovtopDiagram **out);

/**
 * # Safety
 * `diagram` must be null or a live handle.
 */
void kovtop_diagram_free(struct KovtopDiagram *diagram);

/**
 * # Safety
 * `diagram` must be a live handle; `count` must be writable.
 */
enum KovtopStatus kovtop_diagram_point_count(const struct KovtopDiagram *diagram, size_t *count);

/**
 * Singular point `index`, in increasing h.
 *
 * # Safety
 * `diagram` must be a live handle; `point` must be writable.
 */
enum KovtopStatus kovtop_diagram_point(const struct KovtopDiagram *diagram,
                                       size_t index,
                                       struct KovtopPoint *point);

/**
 * Diagram as CSV text.
 *
 * # Safety
 * `model` and `diagram` must be live handles; `buf` must hold `cap` bytes.
 */
enum KovtopStatus kovtop_diagram_csv(const struct KovtopModel *model,
                                     const struct KovtopDiagram *diagram,
                                     char *buf,
                                     size_t cap,
                                     size_t *needed);

/**
 * Compares the analytic singular points with critical values found
 * numerically on the orbit.
 *
 * # Safety
 * `model` must be a live handle; `summary` must be writable.
 */
enum KovtopStatus kovtop_verify(const struct KovtopModel *model,
                                double a,
                                double b,
                                size_t restarts,
                                size_t samples,
                                uint64_t seed,
                                struct KovtopVerifySummary *summary);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KOVTOP_H */
