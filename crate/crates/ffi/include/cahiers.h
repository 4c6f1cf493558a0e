#ifndef CAHIERS_H
#define CAHIERS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CahiersStatus {
  CAHIERS_STATUS_OK = 0,
  CAHIERS_STATUS_NULL_POINTER = 1,
  CAHIERS_STATUS_INVALID_UTF8 = 2,
  CAHIERS_STATUS_PARSE = 3,
  CAHIERS_STATUS_EVAL = 4,
  CAHIERS_STATUS_ALGEBRA = 5,
  CAHIERS_STATUS_JET = 6,
  CAHIERS_STATUS_OUT_OF_RANGE = 7,
  CAHIERS_STATUS_PANIC = 8,
} CahiersStatus;

typedef struct CahiersExpr CahiersExpr;

typedef struct CahiersWeilAlgebra CahiersWeilAlgebra;

typedef struct CahiersWeilElement CahiersWeilElement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or an empty string. The
// pointer stays valid until the next call into the library on this thread.
const char *cahiers_last_error(void);

// # Safety
// `s` must be null or a string returned by this library.
void cahiers_string_free(char *s);

// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum CahiersStatus cahiers_expr_parse(const char *text, struct CahiersExpr **out);

// # Safety
// `e` must be null or a handle from this library, not yet freed.
void cahiers_expr_free(struct CahiersExpr *e);

// # Safety
// `e` must be a live handle and `out` a valid pointer.
enum CahiersStatus cahiers_expr_to_string(const struct CahiersExpr *e, char **out);

// # Safety
// `e` must be a live handle, `var` a NUL-terminated string and `out` a valid
// pointer.
enum CahiersStatus cahiers_expr_differentiate(const struct CahiersExpr *e,
                                              const char *var,
                                              struct CahiersExpr **out);

// Evaluates with `names[i] = values[i]`.
//
// # Safety
// `names` and `values` must each point to `n` elements (or be null when `n`
// is 0).
enum CahiersStatus cahiers_expr_eval(const struct CahiersExpr *e,
                                     const char *const *names,
                                     const double *values,
                                     uintptr_t n,
                                     double *out);

// Value and first derivative of a function of one variable at `x`, by
// evaluation over the dual numbers.
//
// # Safety
// `e` must be a live handle, `var` a NUL-terminated string and the out
// pointers valid.
enum CahiersStatus cahiers_derivative(const struct CahiersExpr *e,
                                      const char *var,
                                      double x,
                                      double *value,
                                      double *derivative);

// The Weil algebra `D(m, l)` of polynomials in `m` generators truncated
// above degree `l`.
//
// # Safety
// `out` must be a valid pointer.
enum CahiersStatus cahiers_weil_disk(uintptr_t m, uint32_t l, struct CahiersWeilAlgebra **out);

// # Safety
// `a` must be null or a handle from this library, not yet freed.
void cahiers_weil_algebra_free(struct CahiersWeilAlgebra *a);

// Dimension over the reals, or 0 for a null handle.
//
// # Safety
// `a` must be null or a live handle.
uintptr_t cahiers_weil_algebra_dim(const struct CahiersWeilAlgebra *a);

// Parses an element such as `1/2 + 3*e1 - e1*e2`.
//
// # Safety
// `a` must be a live handle, `text` a NUL-terminated string and `out` a
// valid pointer.
enum CahiersStatus cahiers_weil_element_parse(const struct CahiersWeilAlgebra *a,
                                              const char *text,
                                              struct CahiersWeilElement **out);

// # Safety
// `el` must be null or a handle from this library, not yet freed.
void cahiers_weil_element_free(struct CahiersWeilElement *el);

// # Safety
// `el` must be a live handle and `out` a valid pointer.
enum CahiersStatus cahiers_weil_element_to_string(const struct CahiersWeilElement *el, char **out);

// Coefficient of the `i`-th basis monomial as a double.
//
// # Safety
// `el` must be a live handle and `out` a valid pointer.
enum CahiersStatus cahiers_weil_element_coeff(const struct CahiersWeilElement *el,
                                              uintptr_t i,
                                              double *out);

// Applies `f(names[0], ..., names[n-1])` to `args`, all in one algebra.
//
// # Safety
// `names` and `args` must each point to `n` valid elements.
enum CahiersStatus cahiers_weil_extend(const struct CahiersExpr *f,
                                       const char *const *names,
                                       const struct CahiersWeilElement *const *args,
                                       uintptr_t n,
                                       struct CahiersWeilElement **out);

// Euler-Lagrange equations of a Lagrangian density, one `EL_<field> = ...`
// line per field. `coords` and `fields` are comma separated.
//
// # Safety
// The string arguments must be NUL-terminated and `out` a valid pointer.
enum CahiersStatus cahiers_el_derive(const char *coords,
                                     const char *fields,
                                     const char *lagrangian,
                                     char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAHIERS_H */
