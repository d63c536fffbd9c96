/* C interface to the exact trace-function library.
 *
 * Conventions:
 *   - Every function that can fail returns vt_status; VT_OK is 0.  On any
 *     failure the thread-local message behind vt_last_error() is updated and
 *     all output parameters are left untouched.
 *   - Objects returned through vt_series** / vt_lattice** / vt_word** are
 *     owned by the caller and released with the matching *_free.
 *   - Strings returned through char** are NUL-terminated, heap-allocated,
 *     and released with vt_string_free.
 *   - Rational scalars cross the boundary as fraction strings "p" or "p/q";
 *     decimal notation is rejected.
 *   - q-expansions serialize as {"lead_exp": "p/q", "coeffs": ["a/b", ...],
 *     "order": n}: the exact leading exponent, then the `order` known
 *     coefficients of q^lead, q^{lead+1}, ...
 */

#ifndef VOATRACE_H
#define VOATRACE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vt_status {
    VT_OK = 0,
    VT_ERR_INVALID_ARGUMENT = 1, /* bad parameter or precondition violation */
    VT_ERR_DOMAIN = 2,           /* input outside a function's domain */
    VT_ERR_PARSE = 3,            /* malformed expression, JSON or fraction */
    VT_ERR_INTERNAL = 4
} vt_status;

/* Message describing the most recent failure on this thread; never NULL. */
const char* vt_last_error(void);

/* Releases any char* produced by this library.  NULL is a no-op. */
void vt_string_free(char* s);

/* Opaque handles. */
typedef struct vt_series vt_series;   /* exact truncated q-expansion */
typedef struct vt_lattice vt_lattice; /* positive definite even lattice */
typedef struct vt_word vt_word;       /* square-bracket creation word */

void vt_series_free(vt_series* s);
void vt_lattice_free(vt_lattice* l);
void vt_word_free(vt_word* w);

/* ---- lattices ------------------------------------------------------- */

/* {"rank": k, "gram": [[...], ...]}; validates symmetry, even diagonal and
 * positive definiteness. */
vt_status vt_lattice_from_json(const char* json_text, vt_lattice** out);
vt_status vt_lattice_to_json(const vt_lattice* l, char** out_json);
vt_status vt_lattice_rank(const vt_lattice* l, int* out_rank);
/* Smallest N >= 1 such that N * gram^{-1} is integral with even diagonal. */
vt_status vt_lattice_level(const vt_lattice* l, long* out_level);

/* ---- creation words -------------------------------------------------- */

/* Grammar: factor* tail?, with factor := h COLOR [-N] | h(c1,...,ck) [-N]
 * and tail := "| f(a1,...,ak)" | "| g(...)" | "| e(...)".  Colors are
 * 1-based shorthands for unit vectors; explicit vectors take rationals. */
vt_status vt_word_parse(const char* expr, int rank, vt_word** out);
vt_status vt_word_to_string(const vt_word* w, char** out_text);
/* Sum of the bracket exponents (tail charge not included). */
vt_status vt_word_weight(const vt_word* w, long* out_weight);

/* ---- series ---------------------------------------------------------- */

vt_status vt_series_from_json(const char* json_text, vt_series** out);
vt_status vt_series_to_json(const vt_series* s, char** out_json);
/* Human-readable form "q^(e) * (a0 + a1 q + a2 q^2 + ...)"; "0" when the
 * series vanishes identically; the prefix is omitted when e = 0. */
vt_status vt_series_to_text(const vt_series* s, char** out_text);
/* Number of known coefficients. */
vt_status vt_series_order(const vt_series* s, int* out_order);
vt_status vt_series_lead_exp(const vt_series* s, char** out_fraction);
/* Coefficient at an absolute exponent (fraction string); zero below the
 * lead, VT_ERR_DOMAIN past the known range. */
vt_status vt_series_coeff_at(const vt_series* s, const char* exponent,
                             char** out_fraction);

vt_status vt_series_add(const vt_series* a, const vt_series* b, vt_series** out);
vt_status vt_series_sub(const vt_series* a, const vt_series* b, vt_series** out);
vt_status vt_series_mul(const vt_series* a, const vt_series* b, vt_series** out);
vt_status vt_series_scale(const vt_series* a, const char* rational,
                          vt_series** out);
vt_status vt_series_truncate(const vt_series* a, int order, vt_series** out);

/* Exact comparison over the shared known range.  *out_equal is 1 or 0; on a
 * mismatch *out_first_mismatch (when non-NULL) receives the exponent of the
 * first differing coefficient as a fraction string, otherwise NULL. */
vt_status vt_series_compare(const vt_series* a, const vt_series* b,
                            int* out_equal, char** out_first_mismatch);

/* Numeric value at q = exp(2 pi i tau); requires Im(tau) >= 0.05.  out_tail
 * receives the modulus of the last included term as a truncation estimate. */
vt_status vt_series_eval(const vt_series* s, double tau_re, double tau_im,
                         double* out_re, double* out_im, double* out_tail);

/* ---- modular ingredient series -------------------------------------- */

/* kind "E":  weight-k Eisenstein series -B_k/k! + 2/(k-1)! sum sigma_{k-1} q^n
 * kind "F":  level-2 companion 2 E_k(2 tau) - E_k(tau)
 * kind "Ehat"/"Fhat": the renormalized multiple (-1)^{n+1} n C(m+n-1, n) of
 * the weight-(m+n) series, symmetric in (m, n); k is ignored for these two
 * and (m, n) are ignored for "E"/"F". */
vt_status vt_eisenstein(const char* kind, long k, long m, long n, int order,
                        vt_series** out);

/* prod_j eta(scale_j * tau)^{power_j} from parallel arrays of length
 * nfactors; scales must be >= 1. */
vt_status vt_eta_quotient(const long* scales, const long* powers,
                          size_t nfactors, int order, vt_series** out);

/* Graded dimension character of the algebra.  algebra is one of "M", "M+",
 * "M-", "VL", "VL+"; the M family takes rank (lattice ignored), the VL
 * family takes a lattice (rank ignored). */
vt_status vt_character(const char* algebra, int rank, const vt_lattice* lattice,
                       int order, vt_series** out);

/* Theta function of the lattice.  With vector NULL: sum_a q^{(a,a)/2}.
 * With vector "c1,...,ck" (fraction entries, lattice-basis coordinates):
 * sum_a (v,a)^power q^{(a,a)/2}. */
vt_status vt_theta(const vt_lattice* lattice, const char* vector, long power,
                   int order, vt_series** out);

/* ---- trace functions ------------------------------------------------- */

/* Graded trace of the zero mode of `w` over the algebra, exactly.
 * method: "closed" for the matching/theta closed forms, "recursion" for the
 * independent recursion engine.  The M family takes rank; the VL family
 * takes a lattice.  Tail words require algebra "VL+". */
vt_status vt_trace(const char* method, const char* algebra, const vt_word* w,
                   int rank, const vt_lattice* lattice, int order,
                   vt_series** out);

/* Brute-force trace over an explicit graded basis up to weight max_weight
 * (q-order max_weight + 1).  Ground truth; cost grows quickly. */
vt_status vt_oracle_trace(const char* algebra, const vt_word* w, int rank,
                          const vt_lattice* lattice, long max_weight,
                          vt_series** out);

/* The quasimodular layer sum of the full-lattice trace (as a q-series it
 * equals the "VL" trace; kept separate for modularity certification). */
vt_status vt_gseries(const vt_word* w, const vt_lattice* lattice, int order,
                     vt_series** out);

/* ---- genus-one kernels ----------------------------------------------- */

/* which is "P1" or "Q1"; m-th z-derivative as a Laurent polynomial in z with
 * q-expansion coefficients:
 *   {"which": ..., "m": ..., "min_exp": ..., "max_exp": ...,
 *    "terms": [{"z_exp": d, "series": {...}}, ...]}   (zero terms omitted) */
vt_status vt_elliptic_series_json(const char* which, long m, int z_order,
                                  int q_order, char** out_json);
/* One "z^(d): <series text>" line per nonzero z-power. */
vt_status vt_elliptic_series_text(const char* which, long m, int z_order,
                                  int q_order, char** out_text);

/* Closed-form exponential-sum evaluation at (z, tau), n_max terms.
 * Requires Im(tau) >= 0.5 and z off the period lattice. */
vt_status vt_elliptic_eval(const char* which, long m, double z_re, double z_im,
                           double tau_re, double tau_im, long n_max,
                           double* out_re, double* out_im, double* out_tail);

/* ---- verification ---------------------------------------------------- */

/* Runs a named verification suite and renders its report.
 *
 * Suites: "heisenberg", "heisenberg-plus" (free-boson, uses rank),
 * "lattice-full", "lattice-plus-M", "lattice-plus-tail" (use lattice; the
 * tail suite takes the charge alpha, default 2 e_1), "elliptic", "jacobi",
 * "modularity" (lattice defaults to the rank-one Gram [[2]] lattice).
 * Equivalence suites check closed form vs recursion vs oracle word by word.
 *
 * alpha may be NULL with alpha_len 0.  *out_passed is 1 iff every case
 * passed; the report (JSON when as_json, indented text otherwise) always
 * comes back on success, pass or fail. */
vt_status vt_verify_suite(const char* suite, int rank,
                          const vt_lattice* lattice, int max_weight, int order,
                          const long* alpha, size_t alpha_len, double tol,
                          int as_json, int* out_passed, char** out_report);

/* Numeric check that |f((a tau + b)/(c tau + d))| = |c tau + d|^weight |f(tau)|
 * over congruence matrices of the given level at deterministic sample points.
 * weight is a fraction string (half-integral weights allowed).  companion,
 * when non-NULL, is the series g completing a depth-one quasimodular form
 * f + g/(4 pi Im tau); pass NULL for honest modular forms. */
vt_status vt_modularity_check(const vt_series* f, const char* weight,
                              long level, int samples, double tol,
                              const vt_series* companion, int as_json,
                              int* out_passed, char** out_report);

#ifdef __cplusplus
}
#endif

#endif /* VOATRACE_H */
