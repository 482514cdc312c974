#ifndef SUMPOLY_H
#define SUMPOLY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SumpolyBasisKind {
  SUMPOLY_BASIS_KIND_CANONICAL = 0,
  SUMPOLY_BASIS_KIND_RANDOM = 1,
} SumpolyBasisKind;

typedef enum SumpolyBoundKind {
  SUMPOLY_BOUND_KIND_OLD = 0,
  SUMPOLY_BOUND_KIND_NEW = 1,
} SumpolyBoundKind;

typedef enum SumpolyStatus {
  SUMPOLY_STATUS_OK = 0,
  SUMPOLY_STATUS_NULL_POINTER = 1,
  SUMPOLY_STATUS_INVALID_ARGUMENT = 2,
  SUMPOLY_STATUS_PARSE = 3,
  SUMPOLY_STATUS_FIELD = 4,
  SUMPOLY_STATUS_TOO_LARGE = 5,
  SUMPOLY_STATUS_BUDGET_EXHAUSTED = 6,
  SUMPOLY_STATUS_UTF8 = 7,
  SUMPOLY_STATUS_PANIC = 8,
} SumpolyStatus;

/*
 A descended Boolean system.
 */
typedef struct SumpolyDescent SumpolyDescent;

/*
 A summation polynomial `S_{m+1}`.
 */
typedef struct SumpolySemaev SumpolySemaev;

/*
 A `d_ff` of `0` means no fall up to the degree limit.
 */
typedef struct SumpolyFirstFall {
  uint32_t d;
  bool dim_drop;
  uint32_t d_ff;
} SumpolyFirstFall;

/*
 Degrees of `0` mean the log holds no such step.
 */
typedef struct SumpolyGroebner {
  uint32_t d_ff;
  uint32_t d_reg;
  bool budget_exhausted;
  size_t basis_len;
} SumpolyGroebner;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread. Valid until the next
 failing call on the same thread; never null.
 */
const char *sumpoly_last_error(void);

/*
 # Safety
 `s` must be null or a string returned by this library.
 */
void sumpoly_string_free(char *s);

/*
 Build `S_{m+1}` over GF(2^n) for the curve constant `a6`. A zero
 `red` selects the default reduction polynomial.

 # Safety
 `out` must be a valid pointer.
 */
enum SumpolyStatus sumpoly_semaev_new(size_t m,
                                      uint32_t n,
                                      uint64_t red,
                                      uint64_t a6,
                                      struct SumpolySemaev **out);

/*
 # Safety
 `h` must be null or a handle from `sumpoly_semaev_new`.
 */
void sumpoly_semaev_free(struct SumpolySemaev *h);

/*
 Number of terms.

 # Safety
 `h` and `out` must be valid pointers.
 */
enum SumpolyStatus sumpoly_semaev_len(const struct SumpolySemaev *h, size_t *out);

/*
 Evaluate at `count` field elements given as masks.

 # Safety
 `h` and `out` must be valid; `xs` must point to `count` values.
 */
enum SumpolyStatus sumpoly_semaev_eval(const struct SumpolySemaev *h,
                                       const uint64_t *xs,
                                       size_t count,
                                       uint64_t *out);

/*
 Polynomial text form.

 # Safety
 `h` and `out` must be valid pointers.
 */
enum SumpolyStatus sumpoly_semaev_to_text(const struct SumpolySemaev *h, char **out);

/*
 Draw a seeded instance and descend it. A zero `c` selects the
 x-coordinate of a random point.

 # Safety
 `out` must be a valid pointer.
 */
enum SumpolyStatus sumpoly_descent_new(size_t m,
                                       uint32_t n,
                                       size_t np,
                                       uint64_t seed,
                                       enum SumpolyBasisKind basis,
                                       uint64_t c,
                                       struct SumpolyDescent **out);

/*
 Parse the descent text format.

 # Safety
 `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum SumpolyStatus sumpoly_descent_parse(const char *text, struct SumpolyDescent **out);

/*
 # Safety
 `h` must be null or a handle from this library.
 */
void sumpoly_descent_free(struct SumpolyDescent *h);

/*
 # Safety
 `h` and `out` must be valid pointers.
 */
enum SumpolyStatus sumpoly_descent_to_text(const struct SumpolyDescent *h, char **out);

/*
 Number of Boolean variables and polynomials.

 # Safety
 All pointers must be valid.
 */
enum SumpolyStatus sumpoly_descent_shape(const struct SumpolyDescent *h,
                                         size_t *num_vars,
                                         size_t *num_polys);

/*
 Macaulay-rank first fall degree. A zero `j_max` selects `2d`.

 # Safety
 `h` and `out` must be valid pointers.
 */
enum SumpolyStatus sumpoly_first_fall(const struct SumpolyDescent *h,
                                      uint32_t j_max,
                                      struct SumpolyFirstFall *out);

/*
 Run the Gröbner engine. Exhausting the budget fills `out` and returns
 `BudgetExhausted`. `log_json` may be null; otherwise it receives the
 step log as JSON.

 # Safety
 `h` and `out` must be valid; `log_json` must be null or valid.
 */
enum SumpolyStatus sumpoly_groebner(const struct SumpolyDescent *h,
                                    size_t mem_mib,
                                    uint64_t seconds,
                                    struct SumpolyGroebner *out,
                                    char **log_json);

/*
 Full pipeline for one seed, as a JSON record.

 # Safety
 `out` must be a valid pointer.
 */
enum SumpolyStatus sumpoly_experiment_json(size_t m,
                                           uint32_t n,
                                           size_t np,
                                           uint64_t seed,
                                           char **out);

/*
 # Safety
 `out` must be a valid pointer.
 */
enum SumpolyStatus sumpoly_crossover(double omega, enum SumpolyBoundKind kind, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUMPOLY_H */
