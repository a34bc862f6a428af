#ifndef SKEWTORSION_H
#define SKEWTORSION_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum StStatus {
  ST_OK = 0,
  ST_ERR_NULL = 1,
  ST_ERR_UTF8 = 2,
  ST_ERR_PARSE = 3,
  ST_ERR_UNKNOWN = 4,
  ST_ERR_PARAM = 5,
  ST_ERR_MATH = 6,
  ST_ERR_PANIC = 7,
} StStatus;

/**
 * Scalar mode selector.
 */
typedef enum StMode {
  ST_EXACT = 0,
  ST_FLOAT = 1,
} StMode;

/**
 * Exact subalgebra of `so(n)`.
 */
typedef struct StAlgebra StAlgebra;

/**
 * Catalog model bundle.
 */
typedef struct StBundle StBundle;

/**
 * Exact alternating form.
 */
typedef struct StForm StForm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; never null.
 */
const char *st_last_error(void);

/**
 * Library version string; static, do not free.
 */
const char *st_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void st_string_free(char *s);

/**
 * Zero `k`-form on `R^n`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum StStatus st_form_new(uintptr_t n, uintptr_t k, struct StForm **out);

/**
 * The `G₂` three-form on `R^7`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum StStatus st_form_g2(struct StForm **out);

/**
 * Adds `num/den` times `e_{idx[0]} ∧ … ∧ e_{idx[k-1]}` (0-based indices, any order).
 *
 * # Safety
 * `form` must be a live handle and `idx` must point to `len` indices.
 */
enum StStatus st_form_add_term(struct StForm *form,
                               const uintptr_t *idx,
                               uintptr_t len,
                               int64_t num,
                               int64_t den);

/**
 * Parses a form from its JSON text (exact mode).
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum StStatus st_form_from_json(const char *json, struct StForm **out);

/**
 * # Safety
 * `form` must be a live handle and `out` a valid pointer.
 */
enum StStatus st_form_to_json(const struct StForm *form, char **out);

/**
 * # Safety
 * `form` must be null or a handle from this library.
 */
void st_form_free(struct StForm *form);

/**
 * Stabilizer of a form in `so(n)`.
 *
 * # Safety
 * `form` must be a live handle and `out` a valid pointer.
 */
enum StStatus st_stabilizer(const struct StForm *form, struct StAlgebra **out);

/**
 * Dimension of an algebra; 0 for a null handle.
 *
 * # Safety
 * `alg` must be null or a live handle.
 */
uintptr_t st_algebra_dim(const struct StAlgebra *alg);

/**
 * # Safety
 * `alg` must be a live handle and `out` a valid pointer.
 */
enum StStatus st_algebra_to_json(const struct StAlgebra *alg, char **out);

/**
 * # Safety
 * `alg` must be null or a handle from this library.
 */
void st_algebra_free(struct StAlgebra *alg);

/**
 * Builds a catalog model. `params` is null or `"k=v,k=v"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `params` null or one, `out` valid.
 */
enum StStatus st_model_build(const char *name,
                             const char *params,
                             enum StMode mode,
                             struct StBundle **out);

/**
 * Dimension of the bundle's manifold (or vector space).
 *
 * # Safety
 * `b` must be null or a live handle.
 */
uintptr_t st_bundle_dim(const struct StBundle *b);

/**
 * Holonomy dimension of the bundle's connection.
 *
 * # Safety
 * `b` must be a live handle and `out` a valid pointer.
 */
enum StStatus st_bundle_holonomy_dim(const struct StBundle *b, uintptr_t *out);

/**
 * Stabilizer dimension of the bundle's torsion.
 *
 * # Safety
 * `b` must be a live handle and `out` a valid pointer.
 */
enum StStatus st_bundle_stabilizer_dim(const struct StBundle *b, uintptr_t *out);

/**
 * # Safety
 * `b` must be a live handle and `out` a valid pointer.
 */
enum StStatus st_bundle_to_json(const struct StBundle *b, char **out);

/**
 * # Safety
 * `b` must be null or a handle from this library.
 */
void st_bundle_free(struct StBundle *b);

/**
 * Runs a check suite; writes the JSON report and whether every check passed.
 *
 * # Safety
 * `suite` must be a NUL-terminated string; `report` and `all_pass` valid pointers.
 */
enum StStatus st_run_suite(const char *suite,
                           enum StMode mode,
                           uint64_t seed,
                           double tol,
                           char **report,
                           bool *all_pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SKEWTORSION_H */
