#ifndef OPTATE_H
#define OPTATE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OptateStatus {
  OPTATE_STATUS_OK = 0,
  OPTATE_STATUS_NULL_POINTER = 1,
  OPTATE_STATUS_INVALID_UTF8 = 2,
  OPTATE_STATUS_MALFORMED_HEX = 3,
  OPTATE_STATUS_OUT_OF_RANGE = 4,
  OPTATE_STATUS_NOT_ON_CURVE = 5,
  OPTATE_STATUS_WRONG_SUBGROUP = 6,
  OPTATE_STATUS_INFINITY = 7,
  OPTATE_STATUS_INVALID_PARAMS = 8,
  OPTATE_STATUS_INVALID_ARGUMENT = 9,
  OPTATE_STATUS_INTERNAL = 10,
} OptateStatus;

// A point of the order-r subgroup of E(F_p).
typedef struct OptateG1 OptateG1;

// A point of the order-r subgroup of the sextic twist, affine.
typedef struct OptateG2 OptateG2;

// A pairing value in F_p12.
typedef struct OptateGt OptateGt;

// Curve parameters.
typedef struct OptateParams OptateParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Owned by the
// library.
const char *optate_last_error(void);

// Library version, static.
const char *optate_version(void);

// Releases a string returned by this library.
//
// # Safety
// `s` is null or a string from this library, not yet freed.
void optate_string_free(char *s);

// The 254-bit reference curve.
//
// # Safety
// `out` must be writable.
enum OptateStatus optate_params_reference(struct OptateParams **out);

// Derives a curve from `t`, searching for b.
//
// # Safety
// `out` must be writable.
enum OptateStatus optate_params_derive(int64_t t, struct OptateParams **out);

// Parameters as a JSON document. Free with [`optate_string_free`].
//
// # Safety
// `params` is a live handle; `out` is writable.
enum OptateStatus optate_params_to_json(const struct OptateParams *params, char **out);

// # Safety
// `params` is null or a live handle.
void optate_params_free(struct OptateParams *params);

// # Safety
// `params` is a live handle; `out` is writable.
enum OptateStatus optate_g1_generator(const struct OptateParams *params, struct OptateG1 **out);

// # Safety
// `params` is a live handle; `out` is writable.
enum OptateStatus optate_g2_generator(const struct OptateParams *params, struct OptateG2 **out);

// Decodes a G1 point from big-endian hex coordinates. Curve and subgroup
// membership are checked when the point is paired.
//
// # Safety
// Pointers are live and NUL-terminated; `out` is writable.
enum OptateStatus optate_g1_from_hex(const struct OptateParams *params,
                                     const char *x,
                                     const char *y,
                                     struct OptateG1 **out);

// Decodes a G2 point `(x0 + x1·u, y0 + y1·u)`.
//
// # Safety
// Pointers are live and NUL-terminated; `out` is writable.
enum OptateStatus optate_g2_from_hex(const struct OptateParams *params,
                                     const char *x0,
                                     const char *x1,
                                     const char *y0,
                                     const char *y1,
                                     struct OptateG2 **out);

// `k·P` for a hex scalar `k`.
//
// # Safety
// Pointers are live; `k` is NUL-terminated; `out` is writable.
enum OptateStatus optate_g1_mul(const struct OptateParams *params,
                                const struct OptateG1 *point,
                                const char *k,
                                struct OptateG1 **out);

// `k·Q` for a hex scalar `k`.
//
// # Safety
// Pointers are live; `k` is NUL-terminated; `out` is writable.
enum OptateStatus optate_g2_mul(const struct OptateParams *params,
                                const struct OptateG2 *point,
                                const char *k,
                                struct OptateG2 **out);

// # Safety
// `p` is null or a live handle.
void optate_g1_free(struct OptateG1 *p);

// # Safety
// `q` is null or a live handle.
void optate_g2_free(struct OptateG2 *q);

// The optimal Ate pairing. Rejects off-curve, infinite and wrong-subgroup
// inputs.
//
// # Safety
// Pointers are live handles; `out` is writable.
enum OptateStatus optate_pairing(const struct OptateParams *params,
                                 const struct OptateG1 *p,
                                 const struct OptateG2 *q,
                                 struct OptateGt **out);

// `g^k` for a hex exponent `k`.
//
// # Safety
// Pointers are live; `k` is NUL-terminated; `out` is writable.
enum OptateStatus optate_gt_pow(const struct OptateParams *params,
                                const struct OptateGt *g,
                                const char *k,
                                struct OptateGt **out);

// 1 when equal, 0 when not, -1 when either pointer is null.
//
// # Safety
// Pointers are null or live handles.
int optate_gt_eq(const struct OptateGt *a, const struct OptateGt *b);

// The twelve F_p coefficients as a JSON array of hex strings. Free with
// [`optate_string_free`].
//
// # Safety
// Pointers are live handles; `out` is writable.
enum OptateStatus optate_gt_to_json(const struct OptateParams *params,
                                    const struct OptateGt *g,
                                    char **out);

// # Safety
// `g` is null or a live handle.
void optate_gt_free(struct OptateGt *g);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPTATE_H */
