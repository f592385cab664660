#ifndef PBLIN_H
#define PBLIN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes. Values 2 to 4 match the command-line exit codes.
 */
typedef enum {
  PBLIN_STATUS_OK = 0,
  PBLIN_STATUS_NULL_POINTER = 1,
  PBLIN_STATUS_BAD_INPUT = 2,
  PBLIN_STATUS_CAP_EXCEEDED = 3,
  PBLIN_STATUS_BRIDGE = 4,
  PBLIN_STATUS_PANIC = 5,
} PblinStatus;

/**
 * Function families for [`pblin_lc`].
 */
typedef enum {
  PBLIN_FAMILY_MONOMIALS = 0,
  PBLIN_FAMILY_SIGNED_PRODUCTS = 1,
  PBLIN_FAMILY_BOOLEAN = 2,
} PblinFamily;

/**
 * A mixed-integer linear model.
 */
typedef struct PblinModel PblinModel;

/**
 * A multilinear polynomial with exact rational coefficients.
 */
typedef struct PblinPoly PblinPoly;

typedef struct {
  size_t vars;
  size_t cons;
  size_t nonzeros;
} PblinModelStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call into the library on this thread.
 */
const char *pblin_last_error(void);

/**
 * Library version as a static string.
 */
const char *pblin_version(void);

void pblin_string_free(char *s);

/**
 * Parses the polynomial text format (`n=<arity>` header, one term per line).
 */
PblinStatus pblin_poly_parse(const char *text, PblinPoly **out);

/**
 * The LABS objective of length `n` in `x`.
 */
PblinStatus pblin_poly_labs(size_t n, PblinPoly **out);

void pblin_poly_free(PblinPoly *poly);

/**
 * Number of variables, or 0 for a null handle.
 */
size_t pblin_poly_arity(const PblinPoly *poly);

/**
 * Canonical text form.
 */
PblinStatus pblin_poly_to_string(const PblinPoly *poly, char **out);

/**
 * Value at `mask`, as an exact rational string (`out_exact`, may be null)
 * and as a double (`out_value`, may be null).
 */
PblinStatus pblin_poly_evaluate(const PblinPoly *poly,
                                uint64_t mask,
                                double *out_value,
                                char **out_exact);

/**
 * Linearization complexity for `family` with default budgets. `out_exact`
 * is false when only an upper bound was established. `out_certificate`
 * may be null.
 */
PblinStatus pblin_lc(const PblinPoly *poly,
                     PblinFamily family,
                     size_t *out_k,
                     bool *out_exact,
                     char **out_certificate);

/**
 * Energy of a `+`/`-` sequence.
 */
PblinStatus pblin_labs_energy(const char *sequence, int64_t *out);

/**
 * Exact LABS optimum; `out_witness` (may be null) receives the
 * lexicographically smallest optimal sequence starting with `+`.
 */
PblinStatus pblin_labs_solve(size_t n, size_t workers, int64_t *out_optimum, char **out_witness);

/**
 * Fortet linearization of every monomial of the LABS objective.
 */
PblinStatus pblin_model_labs_standard(size_t n, PblinModel **out);

/**
 * LABS model with correlation-value indicators tied by no-good rows.
 */
PblinStatus pblin_model_labs_indicator_only(size_t n, PblinModel **out);

/**
 * LABS value-indicator model; `compat` selects the counting with ordered
 * pair variables and full-range value sets.
 */
PblinStatus pblin_model_labs_value_indicator(size_t n, bool compat, PblinModel **out);

/**
 * Fortet model of the monomial linearization of `poly`.
 */
PblinStatus pblin_model_fortet(const PblinPoly *poly, PblinModel **out);

void pblin_model_free(PblinModel *model);

PblinStatus pblin_model_stats(const PblinModel *model, PblinModelStats *out);

/**
 * The model in CPLEX LP format, or its LP relaxation.
 */
PblinStatus pblin_model_write_lp(const PblinModel *model, bool relaxation, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PBLIN_H */
