#ifndef BINPACK_H
#define BINPACK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Largest index accepted by [`bp_pi_string`]. π(i) has about 2^(i−1) bits.
#define BP_PI_MAX_INDEX 16

typedef enum BpStatus {
  BP_STATUS_OK = 0,
  BP_STATUS_NULL_POINTER = 1,
  BP_STATUS_INVALID_ARGUMENT = 2,
  BP_STATUS_PARSE = 3,
  BP_STATUS_TOO_LARGE = 4,
  BP_STATUS_CONSTRUCTION = 5,
  BP_STATUS_PANIC = 6,
} BpStatus;

// Opaque list of item sizes.
typedef struct BpInstance BpInstance;

// Opaque assignment of items to bins.
typedef struct BpPacking BpPacking;

// Parameters for [`bp_generate`]. Zero means "family default" for the
// optional counts.
typedef struct BpFamilyParams {
  size_t m;
  size_t k;
  size_t space;
  size_t classes;
  bool cap3;
} BpFamilyParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null after a success.
// The pointer stays valid until the next library call on the same thread.
const char *bp_last_error(void);

// Library version as a static nul-terminated string.
const char *bp_version(void);

// A new empty instance.
struct BpInstance *bp_instance_new(void);

// Appends the item `numer/denom`, which must lie in (0, 1].
//
// # Safety
// `instance` must be null or a live handle from this library.
enum BpStatus bp_instance_push(struct BpInstance *instance, int64_t numer, int64_t denom);

// Parses instance text (one size per line, `#` comments) into a new handle.
//
// # Safety
// `source` must be null or a nul-terminated string; `out` must be null or
// writable.
enum BpStatus bp_instance_parse(const char *source, struct BpInstance **out);

// Number of items, or 0 for a null handle.
//
// # Safety
// `instance` must be null or a live handle.
size_t bp_instance_len(const struct BpInstance *instance);

// Instance in the text format, as a string to release with
// [`bp_string_free`]. Null on a null handle.
//
// # Safety
// `instance` must be null or a live handle.
char *bp_instance_to_text(const struct BpInstance *instance);

// # Safety
// `instance` must be null or a live handle not used afterwards.
void bp_instance_free(struct BpInstance *instance);

// Packs `instance` with the named algorithm (`nf`, `nfd`, `ff`, `ffd`, `mm`,
// optionally suffixed `_k`). `k` is a cardinality cap, 0 for none; it must
// agree with any suffix.
//
// # Safety
// Pointers must be null or valid as described above.
enum BpStatus bp_run(const struct BpInstance *instance,
                     const char *algorithm,
                     size_t k,
                     struct BpPacking **out);

// Number of bins used, or 0 for a null handle.
//
// # Safety
// `packing` must be null or a live handle.
size_t bp_packing_bins(const struct BpPacking *packing);

// Number of items, or 0 for a null handle.
//
// # Safety
// `packing` must be null or a live handle.
size_t bp_packing_len(const struct BpPacking *packing);

// Copies the 1-based bin label of each item into `buf`, which must hold
// `bp_packing_len` entries.
//
// # Safety
// `buf` must be null or point to `len` writable `size_t`s.
enum BpStatus bp_packing_assignment(const struct BpPacking *packing, size_t *buf, size_t len);

// Sets `*valid` to whether the packing respects capacity, cap and labelling
// for `instance`. Fails when the lengths differ.
//
// # Safety
// Pointers must be null or valid.
enum BpStatus bp_packing_validate(const struct BpPacking *packing,
                                  const struct BpInstance *instance,
                                  bool *valid);

// Packing as JSON, released with [`bp_string_free`]. Null on a null handle.
//
// # Safety
// `packing` must be null or a live handle.
char *bp_packing_to_json(const struct BpPacking *packing);

// # Safety
// `packing` must be null or a live handle not used afterwards.
void bp_packing_free(struct BpPacking *packing);

// Exact optimum bin count. `k` caps items per bin (0 for none); `limit`
// bounds the item count (0 for the default). `witness` may be null; when
// given it receives an optimal packing.
//
// # Safety
// Pointers must be null or valid; `opt` must be non-null.
enum BpStatus bp_opt_exact(const struct BpInstance *instance,
                           size_t k,
                           size_t limit,
                           size_t *opt,
                           struct BpPacking **witness);

// Builds a certified lower-bound instance for the named family
// (`maxmin-unit`, `maxmin-bounded`, `presorted-bounded`, `kcard-bounded`,
// `online-unit`). `certificate` may be null.
//
// # Safety
// Pointers must be null or valid; `instance` and `claimed_opt` must be
// non-null.
enum BpStatus bp_generate(const char *family,
                          struct BpFamilyParams params,
                          struct BpInstance **instance,
                          struct BpPacking **certificate,
                          size_t *claimed_opt);

// `λ_k` as `p/q`, released with [`bp_string_free`]. Null when `k` is 0.
char *bp_lambda_string(size_t k);

// `π(i)` in decimal, released with [`bp_string_free`]. Null when `i` is 0 or
// above [`BP_PI_MAX_INDEX`].
char *bp_pi_string(size_t i);

// # Safety
// `s` must be null or a string returned by this library, not freed before.
void bp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BINPACK_H */
