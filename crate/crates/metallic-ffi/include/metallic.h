#ifndef METALLIC_H
#define METALLIC_H

/* Generated by cbindgen from the metallic-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum MtlStatus {
  /**
   * The call succeeded.
   */
  MTL_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  MTL_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  MTL_STATUS_INVALID_UTF8 = 2,
  /**
   * The input was rejected: unknown token, out-of-range parameter,
   * malformed JSON, or a structure missing required data.
   */
  MTL_STATUS_INVALID_INPUT = 3,
  /**
   * An internal panic was caught; the library state is still valid.
   */
  MTL_STATUS_PANIC = 4,
} MtlStatus;

/**
 * Opaque handle to a polynomial-structure specification.
 */
typedef struct MtlStructure MtlStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * ABI revision of this header; bump on any breaking change.
 */
uint32_t mtl_abi_version(void);

/**
 * Message describing the most recent failure on the calling thread,
 * or NULL if the last call on this thread succeeded. The pointer is
 * owned by the library and is invalidated by the next `mtl_` call on
 * the same thread; do not free it.
 */
const char *mtl_last_error(void);

/**
 * Release a string returned by this library. NULL is a no-op.
 *
 * # Safety
 * `text` must be NULL or a pointer previously returned through a
 * `char **` output of this library, released at most once.
 */
void mtl_string_free(char *text);

/**
 * Build a canonical structure on a flat model space.
 *
 * `kind` is one of "metallic", "golden", "product", "complex",
 * "contact", "para_contact". `p` and `q` are read only for
 * "metallic" and must then be positive. `multiplicities` points to
 * `multiplicity_count` block sizes: two entries (eigenblock sizes)
 * for metallic/golden/product, one entry n for complex (dimension
 * 2n) and for contact/para_contact (dimension 2n+1). On success
 * `*out` owns the new handle; release it with `mtl_structure_free`.
 *
 * # Safety
 * `kind` must be a NUL-terminated string, `multiplicities` must
 * point to `multiplicity_count` readable entries (NULL is allowed
 * when the count is zero), and `out` must be a valid destination.
 */
enum MtlStatus mtl_structure_canonical(const char *kind,
                                       int64_t p,
                                       int64_t q,
                                       const size_t *multiplicities,
                                       size_t multiplicity_count,
                                       struct MtlStructure **out);

/**
 * Parse a structure from its JSON file form. On success `*out` owns
 * the new handle; release it with `mtl_structure_free`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid
 * destination pointer.
 */
enum MtlStatus mtl_structure_from_json(const char *json, struct MtlStructure **out);

/**
 * Serialize a structure to its JSON file form. The caller owns
 * `*json_out` and releases it with `mtl_string_free`.
 *
 * # Safety
 * `structure` must be a live handle from this library and `json_out`
 * a valid destination pointer.
 */
enum MtlStatus mtl_structure_to_json(const struct MtlStructure *structure, char **json_out);

/**
 * Dimension of the flat model space the structure lives on.
 *
 * # Safety
 * `structure` must be a live handle and `dim_out` a valid
 * destination pointer.
 */
enum MtlStatus mtl_structure_dim(const struct MtlStructure *structure, size_t *dim_out);

/**
 * Run the defining-identity checks, and with `check_metric` also the
 * metric-compatibility checks (the structure must then carry a
 * metric). `*json_out` receives a report
 * `{kind, dim, metric_checked, checks: [{name, ok, residual}], passed}`
 * with exact residuals; the caller releases it with
 * `mtl_string_free`. A failed mathematical check is reported inside
 * the JSON (`passed: false`), not as a status code.
 *
 * # Safety
 * `structure` must be a live handle and `json_out` a valid
 * destination pointer.
 */
enum MtlStatus mtl_structure_verify(const struct MtlStructure *structure,
                                    bool check_metric,
                                    char **json_out);

/**
 * Release a structure handle. NULL is a no-op.
 *
 * # Safety
 * `structure` must be NULL or a handle from this library, released
 * at most once.
 */
void mtl_structure_free(struct MtlStructure *structure);

/**
 * Classify the constancy question for metallic maps against one
 * target family. `family` is one of "golden", "product", "complex",
 * "contact", "para_contact"; `direction` is "source" (metallic
 * domain) or "target" (metallic codomain). `*json_out` receives
 * `{p, q, family, direction, obstruction, verdict, witness}` with the
 * exact obstruction value and, when the obstruction vanishes, an
 * exactly verified non-zero intertwiner witness. The caller releases
 * the string with `mtl_string_free`.
 *
 * # Safety
 * `family` and `direction` must be NUL-terminated strings and
 * `json_out` a valid destination pointer.
 */
enum MtlStatus mtl_classify(int64_t p,
                            int64_t q,
                            const char *family,
                            const char *direction,
                            char **json_out);

/**
 * Classify every cell of the parameter grid `1 ≤ p ≤ p_max`,
 * `1 ≤ q ≤ q_max` across all five families and both directions.
 * `*json_out` receives the full record array in deterministic order;
 * the caller releases it with `mtl_string_free`.
 *
 * # Safety
 * `json_out` must be a valid destination pointer.
 */
enum MtlStatus mtl_enumerate(int64_t p_max, int64_t q_max, char **json_out);

/**
 * Evaluate the harmonicity certificate for an identity map between
 * the metallic model on `(p1, q1)` and the one on `(p2, q2)`.
 * `*json_out` receives the exact coefficient, the root comparisons,
 * and the verdict; the caller releases it with `mtl_string_free`.
 *
 * # Safety
 * `json_out` must be a valid destination pointer.
 */
enum MtlStatus mtl_certificate(int64_t p1, int64_t q1, int64_t p2, int64_t q2, char **json_out);

/**
 * The metallic mean `(p + sqrt(p² + 4q)) / 2` as a double.
 *
 * # Safety
 * `value_out` must be a valid destination pointer.
 */
enum MtlStatus mtl_metallic_mean(int64_t p, int64_t q, double *value_out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* METALLIC_H */
