#ifndef SHIFTBRIBERY_H
#define SHIFTBRIBERY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome codes reported by `sb_report_outcome`.
 */
#define SB_OUTCOME_FEASIBLE 0

#define SB_OUTCOME_INFEASIBLE 1

#define SB_OUTCOME_INCONCLUSIVE 2

/**
 * Result codes for the C interface.
 */
typedef enum SbStatus {
  SbOk = 0,
  SbNullArgument = 1,
  SbInvalidUtf8 = 2,
  SbParseError = 3,
  SbInvalidArgument = 4,
  SbSolverError = 5,
} SbStatus;

/**
 * Opaque parsed bribery instance.
 */
typedef struct SbInstance SbInstance;

/**
 * Opaque solver report.
 */
typedef struct SbReport SbReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *sb_version(void);

/**
 * Parses an instance file (UTF-8 text). Returns NULL on failure with the
 * status set; free the handle with `sb_instance_free`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string or NULL.
 */
struct SbInstance *sb_instance_parse(const char *text, enum SbStatus *status);

/**
 * # Safety
 * `inst` must come from `sb_instance_parse` and not be freed twice.
 */
void sb_instance_free(struct SbInstance *inst);

/**
 * Stable digest of the canonical serialization; free with `sb_string_free`.
 *
 * # Safety
 * `inst` must be a live handle from `sb_instance_parse` or NULL.
 */
char *sb_instance_digest(const struct SbInstance *inst);

/**
 * Canonical serialization of the instance; free with `sb_string_free`.
 *
 * # Safety
 * `inst` must be a live handle from `sb_instance_parse` or NULL.
 */
char *sb_instance_canonical(const struct SbInstance *inst);

/**
 * Runs a solver. `strategy` accepts the CLI strategy names; `epsilon` is
 * required for "fptas" (e.g. "0.25"), `smax` must be nonnegative for
 * "xp-shifts" and is ignored otherwise. Free the report with
 * `sb_report_free`.
 *
 * # Safety
 * Pointer arguments must be valid (or NULL where documented).
 */
struct SbReport *sb_solve(const struct SbInstance *inst,
                          const char *strategy,
                          const char *epsilon,
                          int64_t smax,
                          enum SbStatus *status);

/**
 * # Safety
 * `report` must come from `sb_solve` and not be freed twice.
 */
void sb_report_free(struct SbReport *report);

/**
 * 0 feasible, 1 infeasible, 2 inconclusive; -1 on NULL.
 *
 * # Safety
 * `report` must be a live handle from `sb_solve` or NULL.
 */
int32_t sb_report_outcome(const struct SbReport *report);

/**
 * Cost of the found action, or -1 when there is none.
 *
 * # Safety
 * `report` must be a live handle from `sb_solve` or NULL.
 */
int64_t sb_report_cost(const struct SbReport *report);

/**
 * 1 when the solver guarantees the cost is optimal.
 *
 * # Safety
 * `report` must be a live handle from `sb_solve` or NULL.
 */
int32_t sb_report_optimal(const struct SbReport *report);

/**
 * Full report as a JSON string (borrowed from the report; do not free, the
 * pointer is valid until `sb_report_free`).
 *
 * # Safety
 * `report` must be a live handle from `sb_solve` or NULL.
 */
const char *sb_report_json(const struct SbReport *report);

/**
 * Frees strings returned by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned by an `sb_*` function that
 * documents `sb_string_free`, and not yet freed.
 */
void sb_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHIFTBRIBERY_H */
