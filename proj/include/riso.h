/* riso — exact least-squares step-function fitting with few pieces.
 *
 * C interface to the shared library.  All functions that can fail return a
 * riso_status; out-parameters are written only on RISO_OK.  Handles are
 * opaque and must be released with the matching _free call.  Indices in knot
 * arrays are 1-based right endpoints of the constant blocks.
 */
#ifndef RISO_H
#define RISO_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum riso_status {
  RISO_OK = 0,
  RISO_ERROR_ARGUMENT = 1,    /* invalid parameter value */
  RISO_ERROR_DIMENSION = 2,   /* empty input or mismatched lengths */
  RISO_ERROR_RANGE = 3,       /* index outside the series */
  RISO_ERROR_STRUCTURE = 4,   /* malformed knots or levels */
  RISO_ERROR_UNSUPPORTED = 5, /* operation not available for this input */
  RISO_ERROR_SIZE = 6,        /* input too large for this operation */
  RISO_ERROR_CONFIG = 7,      /* benchmark configuration rejected */
  RISO_ERROR_IO = 8,          /* file could not be read or written */
  RISO_ERROR_INTERNAL = 9
} riso_status;

/* Static description of a status code. */
const char* riso_status_message(riso_status status);

/* Detail message for the most recent failure on this thread ("" if none). */
const char* riso_last_error(void);

unsigned riso_abi_version(void);

/* ---- series ---------------------------------------------------------- */

typedef struct riso_series riso_series;

riso_status riso_series_create(const double* values, size_t n, riso_series** out);
riso_status riso_series_create_weighted(const double* values, const double* weights,
                                        size_t n, riso_series** out);
void riso_series_free(riso_series* series);
size_t riso_series_length(const riso_series* series);

/* Median-absolute-first-difference noise scale (needs n >= 2). */
riso_status riso_estimate_sigma(const riso_series* series, double* out);

/* ---- fitting --------------------------------------------------------- */

typedef struct riso_fit riso_fit;

/* Full isotonic (nondecreasing) or antitonic (nonincreasing) fit. */
riso_status riso_fit_isotonic(const riso_series* series, riso_fit** out);
riso_status riso_fit_antitonic(const riso_series* series, riso_fit** out);

/* Best nondecreasing fit with at most k pieces (exact). */
riso_status riso_fit_reduced(const riso_series* series, size_t k, riso_fit** out);

/* Best unrestricted segmentation into at most k blocks (exact). */
riso_status riso_fit_segment(const riso_series* series, size_t k, riso_fit** out);

/* Exponential-weights aggregation of k-piece unimodal shapes. */
riso_status riso_fit_unimodal(const riso_series* series, size_t k, double sigma,
                              uint64_t seed, riso_fit** out);

/* Penalized selection of the piece count for the nondecreasing fit.
 * family: 0 = iterated-log penalty, 1 = variant with a data-driven value at
 * k = n.  Pass tau = 0 to derive tau = c_tau * sigma^2, sigma = 0 to
 * estimate sigma from the data, c_tau = 0 for the default constant (6). */
riso_status riso_fit_auto(const riso_series* series, int family, double tau,
                          double sigma, double c_tau, riso_fit** out);

void riso_fit_free(riso_fit* fit);

/* ---- fit accessors ---------------------------------------------------- */

size_t riso_fit_length(const riso_fit* fit);
size_t riso_fit_num_pieces(const riso_fit* fit);
double riso_fit_sse(const riso_fit* fit);

/* Copy the piece descriptions; out must hold riso_fit_num_pieces entries. */
riso_status riso_fit_knots(const riso_fit* fit, size_t* out);
riso_status riso_fit_levels(const riso_fit* fit, double* out);

/* Copy the fitted vector; out must hold riso_fit_length entries. */
riso_status riso_fit_values(const riso_fit* fit, double* out);

/* Fitted value at 1-based index i. */
riso_status riso_fit_value_at(const riso_fit* fit, size_t i, double* out);

/* Selection diagnostics; RISO_ERROR_UNSUPPORTED when the fit was not
 * produced by riso_fit_auto (or, for sigma, riso_fit_unimodal). */
riso_status riso_fit_k_hat(const riso_fit* fit, size_t* out);
riso_status riso_fit_penalty(const riso_fit* fit, double* out);
riso_status riso_fit_objective(const riso_fit* fit, double* out);
riso_status riso_fit_sigma_used(const riso_fit* fit, double* out);
riso_status riso_fit_tau_used(const riso_fit* fit, double* out);

/* ---- benchmark harness ------------------------------------------------ */

/* Run the experiments described by a JSON config file and write the risk
 * table as CSV.  threads <= 1 runs serially; results are identical for any
 * thread count. */
riso_status riso_bench_run(const char* config_path, const char* out_path,
                           int threads);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RISO_H */
