#include "riso.h"

#include <algorithm>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "bench.hpp"
#include "errors.hpp"
#include "model_select.hpp"
#include "pava.hpp"
#include "reduced.hpp"
#include "segment.hpp"
#include "series.hpp"
#include "unimodal.hpp"

struct riso_series {
  riso::Series series;
};

struct riso_fit {
  riso::FitResult result;
  std::optional<size_t> k_hat;
  std::optional<double> objective;
  std::optional<double> sigma_used;
  std::optional<double> tau_used;
};

namespace {

thread_local std::string g_last_error;

riso_status to_status(riso::ErrorKind kind) {
  switch (kind) {
    case riso::ErrorKind::Argument: return RISO_ERROR_ARGUMENT;
    case riso::ErrorKind::Dimension: return RISO_ERROR_DIMENSION;
    case riso::ErrorKind::Range: return RISO_ERROR_RANGE;
    case riso::ErrorKind::Structure: return RISO_ERROR_STRUCTURE;
    case riso::ErrorKind::Unsupported: return RISO_ERROR_UNSUPPORTED;
    case riso::ErrorKind::Size: return RISO_ERROR_SIZE;
    case riso::ErrorKind::Config: return RISO_ERROR_CONFIG;
    case riso::ErrorKind::Io: return RISO_ERROR_IO;
  }
  return RISO_ERROR_INTERNAL;
}

template <typename F>
riso_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const riso::Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RISO_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RISO_ERROR_INTERNAL;
  }
}

riso_status arg_error(const char* message) {
  g_last_error = message;
  return RISO_ERROR_ARGUMENT;
}

}  // namespace

extern "C" {

const char* riso_status_message(riso_status status) {
  switch (status) {
    case RISO_OK: return "ok";
    case RISO_ERROR_ARGUMENT: return "invalid argument";
    case RISO_ERROR_DIMENSION: return "dimension mismatch or empty input";
    case RISO_ERROR_RANGE: return "index out of range";
    case RISO_ERROR_STRUCTURE: return "malformed step function";
    case RISO_ERROR_UNSUPPORTED: return "unsupported operation";
    case RISO_ERROR_SIZE: return "input too large";
    case RISO_ERROR_CONFIG: return "invalid configuration";
    case RISO_ERROR_IO: return "I/O failure";
    case RISO_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* riso_last_error(void) { return g_last_error.c_str(); }

unsigned riso_abi_version(void) { return 1; }

riso_status riso_series_create(const double* values, size_t n, riso_series** out) {
  if (!values || !out) return arg_error("null pointer");
  return guarded([&]() {
    *out = new riso_series{riso::Series(std::vector<double>(values, values + n))};
    return RISO_OK;
  });
}

riso_status riso_series_create_weighted(const double* values, const double* weights,
                                        size_t n, riso_series** out) {
  if (!values || !weights || !out) return arg_error("null pointer");
  return guarded([&]() {
    *out = new riso_series{riso::Series(std::vector<double>(values, values + n),
                                        std::vector<double>(weights, weights + n))};
    return RISO_OK;
  });
}

void riso_series_free(riso_series* series) { delete series; }

size_t riso_series_length(const riso_series* series) {
  return series ? series->series.size() : 0;
}

riso_status riso_estimate_sigma(const riso_series* series, double* out) {
  if (!series || !out) return arg_error("null pointer");
  return guarded([&]() {
    *out = riso::estimate_sigma(series->series);
    return RISO_OK;
  });
}

riso_status riso_fit_isotonic(const riso_series* series, riso_fit** out) {
  if (!series || !out) return arg_error("null pointer");
  return guarded([&]() {
    *out = new riso_fit{riso::isotonic_fit(series->series), {}, {}, {}, {}};
    return RISO_OK;
  });
}

riso_status riso_fit_antitonic(const riso_series* series, riso_fit** out) {
  if (!series || !out) return arg_error("null pointer");
  return guarded([&]() {
    *out = new riso_fit{riso::antitonic_fit(series->series), {}, {}, {}, {}};
    return RISO_OK;
  });
}

riso_status riso_fit_reduced(const riso_series* series, size_t k, riso_fit** out) {
  if (!series || !out) return arg_error("null pointer");
  return guarded([&]() {
    *out = new riso_fit{riso::fit_k(series->series, k), {}, {}, {}, {}};
    return RISO_OK;
  });
}

riso_status riso_fit_segment(const riso_series* series, size_t k, riso_fit** out) {
  if (!series || !out) return arg_error("null pointer");
  return guarded([&]() {
    *out = new riso_fit{riso::segment_fit(series->series, k), {}, {}, {}, {}};
    return RISO_OK;
  });
}

riso_status riso_fit_unimodal(const riso_series* series, size_t k, double sigma,
                              uint64_t seed, riso_fit** out) {
  if (!series || !out) return arg_error("null pointer");
  return guarded([&]() {
    auto fit = riso::unimodal_aggregate(series->series, k, sigma, seed);
    auto* handle = new riso_fit{std::move(fit), {}, {}, {}, {}};
    handle->sigma_used = sigma;
    *out = handle;
    return RISO_OK;
  });
}

riso_status riso_fit_auto(const riso_series* series, int family, double tau,
                          double sigma, double c_tau, riso_fit** out) {
  if (!series || !out) return arg_error("null pointer");
  if (family != 0 && family != 1) return arg_error("family must be 0 or 1");
  if (tau < 0.0 || sigma < 0.0 || c_tau < 0.0) {
    return arg_error("tau, sigma, and c_tau must be nonnegative (0 = default)");
  }
  return guarded([&]() {
    riso::PenaltySpec spec;
    spec.family = family == 0 ? riso::PenaltyFamily::Plain : riso::PenaltyFamily::Modified;
    if (tau > 0.0) spec.tau = tau;
    if (sigma > 0.0) spec.sigma = sigma;
    if (c_tau > 0.0) spec.c_tau = c_tau;
    riso::SelectResult sel =
        riso::select_k(riso::fit_all_k(series->series), series->series, spec);
    auto* handle = new riso_fit{std::move(sel.result), sel.k_hat, sel.objective,
                                sel.sigma_used, sel.tau_used};
    *out = handle;
    return RISO_OK;
  });
}

void riso_fit_free(riso_fit* fit) { delete fit; }

size_t riso_fit_length(const riso_fit* fit) {
  return fit ? fit->result.fit.n() : 0;
}

size_t riso_fit_num_pieces(const riso_fit* fit) {
  return fit ? fit->result.fit.pieces() : 0;
}

double riso_fit_sse(const riso_fit* fit) {
  return fit ? fit->result.sse : 0.0;
}

riso_status riso_fit_knots(const riso_fit* fit, size_t* out) {
  if (!fit || !out) return arg_error("null pointer");
  const auto& knots = fit->result.fit.knots();
  std::copy(knots.begin(), knots.end(), out);
  return RISO_OK;
}

riso_status riso_fit_levels(const riso_fit* fit, double* out) {
  if (!fit || !out) return arg_error("null pointer");
  const auto& levels = fit->result.fit.levels();
  std::copy(levels.begin(), levels.end(), out);
  return RISO_OK;
}

riso_status riso_fit_values(const riso_fit* fit, double* out) {
  if (!fit || !out) return arg_error("null pointer");
  std::vector<double> dense = fit->result.fit.dense();
  std::copy(dense.begin(), dense.end(), out);
  return RISO_OK;
}

riso_status riso_fit_value_at(const riso_fit* fit, size_t i, double* out) {
  if (!fit || !out) return arg_error("null pointer");
  return guarded([&]() {
    *out = fit->result.fit.evaluate(i);
    return RISO_OK;
  });
}

riso_status riso_fit_k_hat(const riso_fit* fit, size_t* out) {
  if (!fit || !out) return arg_error("null pointer");
  if (!fit->k_hat) {
    g_last_error = "fit has no selection step";
    return RISO_ERROR_UNSUPPORTED;
  }
  *out = *fit->k_hat;
  return RISO_OK;
}

riso_status riso_fit_penalty(const riso_fit* fit, double* out) {
  if (!fit || !out) return arg_error("null pointer");
  if (!fit->result.penalty) {
    g_last_error = "fit carries no penalty";
    return RISO_ERROR_UNSUPPORTED;
  }
  *out = *fit->result.penalty;
  return RISO_OK;
}

riso_status riso_fit_objective(const riso_fit* fit, double* out) {
  if (!fit || !out) return arg_error("null pointer");
  if (!fit->objective) {
    g_last_error = "fit has no selection step";
    return RISO_ERROR_UNSUPPORTED;
  }
  *out = *fit->objective;
  return RISO_OK;
}

riso_status riso_fit_sigma_used(const riso_fit* fit, double* out) {
  if (!fit || !out) return arg_error("null pointer");
  if (!fit->sigma_used) {
    g_last_error = "fit did not use a noise scale";
    return RISO_ERROR_UNSUPPORTED;
  }
  *out = *fit->sigma_used;
  return RISO_OK;
}

riso_status riso_fit_tau_used(const riso_fit* fit, double* out) {
  if (!fit || !out) return arg_error("null pointer");
  if (!fit->tau_used) {
    g_last_error = "fit did not use a penalty scale";
    return RISO_ERROR_UNSUPPORTED;
  }
  *out = *fit->tau_used;
  return RISO_OK;
}

riso_status riso_bench_run(const char* config_path, const char* out_path, int threads) {
  if (!config_path || !out_path) return arg_error("null pointer");
  return guarded([&]() {
    auto configs = riso::load_config(config_path);
    riso::RiskTable table = riso::run_config(configs, threads);
    riso::write_table(table, out_path);
    return RISO_OK;
  });
}

}  // extern "C"
