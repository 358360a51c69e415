#ifndef ABELIANIZE_H
#define ABELIANIZE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

// Which quotient `abz_integrate` integrates over.
typedef enum AbzIntegration {
  ABZ_INTEGRATION_GROUP = 0,
  ABZ_INTEGRATION_TORUS = 1,
  ABZ_INTEGRATION_SUBGROUP = 2,
} AbzIntegration;

typedef enum AbzStatus {
  ABZ_STATUS_OK = 0,
  ABZ_STATUS_NULL_POINTER = 1,
  ABZ_STATUS_INVALID_UTF8 = 2,
  ABZ_STATUS_CONFIG_ERROR = 3,
  ABZ_STATUS_INVALID_ARGUMENT = 4,
  ABZ_STATUS_COMPUTATION_ERROR = 5,
  ABZ_STATUS_PANIC = 6,
} AbzStatus;

// Opaque model handle.
typedef struct AbzModel AbzModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a successful call.
// The pointer stays valid until the next `abz_*` call on the same thread.
const char *abz_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *abz_version(void);

// Builds the Grassmannian model `G(k, n)`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum AbzStatus abz_model_grassmannian(size_t k, size_t n, struct AbzModel **out);

// Parses and validates a JSON model document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum AbzStatus abz_model_from_json(const char *json, struct AbzModel **out);

// Serializes a model to JSON with explicit root data.
//
// # Safety
// `model` must be a live handle; `out` must be writable.
enum AbzStatus abz_model_to_json(const struct AbzModel *model, char **out);

// # Safety
// `model` must be null or a handle from this library that has not been freed.
void abz_model_free(struct AbzModel *model);

// # Safety
// `s` must be null or a string returned by this library that has not been freed.
void abz_string_free(char *s);

// Number of variables `k` of the model's ring.
//
// # Safety
// `model` must be a live handle.
size_t abz_model_variable_count(const struct AbzModel *model);

// `int_{X//G} c_1^{m_1} .. c_k^{m_k}` for a Grassmannian-type model.
//
// # Safety
// `exps` must point to `len` readable values; `out` must be writable.
enum AbzStatus abz_chern_pairing(const struct AbzModel *model,
                                 const uint64_t *exps,
                                 size_t len,
                                 char **out);

// The same pairing from the Schubert-calculus oracle.
//
// # Safety
// `exps` must point to `len` readable values; `out` must be writable.
enum AbzStatus abz_oracle_chern_pairing(size_t k,
                                        size_t n,
                                        const uint64_t *exps,
                                        size_t len,
                                        char **out);

// Integrates a polynomial given in the text syntax, e.g. `"u1^2*u2^2"`.
//
// # Safety
// `poly` must be a NUL-terminated string; `out` must be writable.
enum AbzStatus abz_integrate(const struct AbzModel *model,
                             const char *poly,
                             enum AbzIntegration over,
                             char **out);

// # Safety
// `model` must be a live handle; `out` must be writable.
enum AbzStatus abz_euler_characteristic(const struct AbzModel *model, char **out);

// # Safety
// `model` must be a live handle; `out` must be writable.
enum AbzStatus abz_signature(const struct AbzModel *model, char **out);

// Characteristic number of a named class (`"todd"`, `"l-class"`, ...). For `"custom"`, `coeffs`
// is a comma-separated list of rationals, or null to use the model's `custom_series`.
//
// # Safety
// String arguments must be NUL-terminated (`coeffs` may be null); `out` must be writable.
enum AbzStatus abz_characteristic_number(const struct AbzModel *model,
                                         const char *class_name,
                                         const char *coeffs,
                                         char **out);

// Index twisted by a split bundle `"ROOT[:MULT];.."`; null means the trivial line bundle.
//
// # Safety
// `bundle` must be null or NUL-terminated; `out` must be writable.
enum AbzStatus abz_index(const struct AbzModel *model,
                         const char *bundle,
                         bool use_subgroup,
                         char **out);

// Betti numbers `b_0..b_D`; release with `abz_betti_free(*out, *len)`.
//
// # Safety
// `out` and `len` must be writable.
enum AbzStatus abz_betti(const struct AbzModel *model, size_t **out, size_t *len);

// # Safety
// `(values, len)` must come from `abz_betti` and not have been freed.
void abz_betti_free(size_t *values, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ABELIANIZE_H */
