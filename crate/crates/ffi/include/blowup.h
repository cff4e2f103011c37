#ifndef BLOWUP_H
#define BLOWUP_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum BuStatus {
  BU_STATUS_OK = 0,
  /**
   * `bu_verify_json` ran and at least one identity check failed.
   */
  BU_STATUS_CHECK_FAILED = 1,
  BU_STATUS_NULL_POINTER = 2,
  BU_STATUS_INVALID_UTF8 = 3,
  BU_STATUS_PARSE_ERROR = 4,
  BU_STATUS_UNKNOWN_PRESET = 5,
  BU_STATUS_DIMENSION_MISMATCH = 6,
  BU_STATUS_WHITNEY_VIOLATION = 7,
  BU_STATUS_TABLE_INCONSISTENCY = 8,
  BU_STATUS_NO_INTEGRATION = 9,
  BU_STATUS_INVALID_INPUT = 10,
  /**
   * A panic was caught at the boundary; this is a bug.
   */
  BU_STATUS_INTERNAL = 11,
} BuStatus;

/**
 * A validated blow-up scenario.
 */
typedef struct BuScenario BuScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and validates a JSON scenario. On success `*out` owns a new
 * handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BuStatus bu_scenario_parse(const char *json, struct BuScenario **out);

/**
 * Builds a scenario from presets, e.g. `"cp:3"` and `"cp-linear:1"`.
 * `mod2` selects Z/2 coefficients when nonzero.
 *
 * # Safety
 * `m` and `n` must be NUL-terminated strings and `out` a valid pointer.
 */
enum BuStatus bu_scenario_from_presets(const char *m,
                                       const char *n,
                                       int mod2,
                                       struct BuScenario **out);

/**
 * Formal blow-up of a `dim_n`-manifold inside a `dim_m`-manifold.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BuStatus bu_scenario_formal(uint32_t dim_m, uint32_t dim_n, int mod2, struct BuScenario **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `scenario` must come from this library and not be used afterwards.
 */
void bu_scenario_free(struct BuScenario *scenario);

/**
 * Characteristic classes as JSON. A negative `max_degree` prints all.
 *
 * # Safety
 * `scenario` must be a live handle and `out` a valid pointer.
 */
enum BuStatus bu_compute_json(const struct BuScenario *scenario, int32_t max_degree, char **out);

/**
 * Runs the identity suite. The report is written to `*out` whether or not
 * the checks pass; the status is `CheckFailed` if any failed.
 *
 * # Safety
 * `scenario` must be a live handle and `out` a valid pointer.
 */
enum BuStatus bu_verify_json(const struct BuScenario *scenario,
                             size_t trials,
                             uint64_t seed,
                             char **out);

/**
 * Euler characteristic of the blow-up. Formal scenarios have no
 * integration and return `NoIntegration`.
 *
 * # Safety
 * `scenario` must be a live handle and `out` a valid pointer.
 */
enum BuStatus bu_euler(const struct BuScenario *scenario, int64_t *out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void bu_string_free(char *s);

/**
 * Message for the last failed call on this thread, or an empty string.
 * Valid until the next call into the library from the same thread.
 */
const char *bu_last_error(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BLOWUP_H */
