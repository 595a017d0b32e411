#include "unimodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "errors.hpp"
#include "kahan.hpp"
#include "reduced.hpp"
#include "signals.hpp"

namespace riso {

std::vector<OmegaIndex> enumerate_omega(std::size_t k, std::size_t n) {
  if (k < 1 || n < 1) {
    raise(ErrorKind::Argument, "need k >= 1 and n >= 1");
  }
  std::vector<OmegaIndex> out;
  for (std::size_t u = 0; u <= std::min(k, n); ++u) {
    std::size_t v = k - u;
    if (v > n) continue;
    // u <= mode and v <= n - mode.
    for (std::size_t mode = u; mode + v <= n; ++mode) {
      out.push_back({u, v, mode});
    }
  }
  return out;
}

bool omega_fittable(const OmegaIndex& w, std::size_t n) {
  if (w.left_pieces == 0 && w.mode != 0) return false;
  if (w.right_pieces == 0 && w.mode != n) return false;
  return true;
}

namespace {

void check_omega(const OmegaIndex& w, std::size_t k, std::size_t n) {
  if (w.left_pieces + w.right_pieces != k || w.mode > n ||
      w.left_pieces > w.mode || w.right_pieces > n - w.mode) {
    raise(ErrorKind::Argument, "shape triple violates the candidate constraints");
  }
  if (!omega_fittable(w, n)) {
    raise(ErrorKind::Argument, "zero-piece side must cover no indices");
  }
}

Series negated(const std::vector<double>& values, std::size_t from, std::size_t to) {
  std::vector<double> v(to - from);
  for (std::size_t i = from; i < to; ++i) v[i - from] = -values[i];
  return Series(std::move(v));
}

FitResult assemble(const Series& x, const OmegaIndex& w,
                   const std::optional<FitResult>& left,
                   const std::optional<FitResult>& right,
                   const std::string& method) {
  std::vector<std::size_t> knots;
  std::vector<double> levels;
  if (left) {
    knots = left->fit.knots();
    levels = left->fit.levels();
  }
  if (right) {
    for (std::size_t j = 0; j < right->fit.pieces(); ++j) {
      knots.push_back(w.mode + right->fit.knots()[j]);
      levels.push_back(-right->fit.levels()[j]);
    }
  }
  StepFunction fit(x.size(), std::move(knots), std::move(levels), Monotone::None);
  double rss = sse(fit, x);
  std::size_t pieces = fit.pieces();
  return FitResult{std::move(fit), rss, pieces, std::nullopt, method};
}

}  // namespace

FitResult unimodal_fit_mode(const Series& x, const OmegaIndex& w) {
  if (!x.unit_weights()) {
    raise(ErrorKind::Unsupported, "unimodal fitting requires unit weights");
  }
  const std::size_t n = x.size();
  check_omega(w, w.left_pieces + w.right_pieces, n);
  std::optional<FitResult> left;
  std::optional<FitResult> right;
  if (w.mode > 0) {
    Series prefix(std::vector<double>(x.values().begin(),
                                      x.values().begin() + static_cast<long>(w.mode)));
    left = fit_k(prefix, w.left_pieces);
  }
  if (w.mode < n) {
    // Antitonic side: negate, fit isotonic with the right budget, negate back
    // inside assemble().
    right = fit_k(negated(x.values(), w.mode, n), w.right_pieces);
  }
  return assemble(x, w, left, right, "unimodal-mode");
}

std::vector<double> softmax_weights(const std::vector<double>& residuals,
                                    double temperature) {
  if (residuals.empty()) {
    raise(ErrorKind::Dimension, "no residuals to weight");
  }
  if (temperature <= 0.0) {
    raise(ErrorKind::Argument, "temperature must be positive");
  }
  double lo = *std::min_element(residuals.begin(), residuals.end());
  std::vector<double> w(residuals.size());
  KahanSum total;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    w[i] = std::exp(-(residuals[i] - lo) / temperature);
    total.add(w[i]);
  }
  double z = total.value();
  for (double& v : w) v /= z;
  return w;
}

AggregateDetail unimodal_aggregate_detail(const Series& x, std::size_t k,
                                          double sigma, std::uint64_t seed) {
  if (!x.unit_weights()) {
    raise(ErrorKind::Unsupported, "unimodal fitting requires unit weights");
  }
  if (sigma <= 0.0) {
    raise(ErrorKind::Argument, "sigma must be positive");
  }
  const std::size_t n = x.size();
  RngStream rng(derive_key(seed, {0x756e69ULL}));
  std::vector<double> w_noise = sample_noise({NoiseLaw::Gaussian, 2.0}, n, sigma, rng);
  std::vector<double> u_vals(n), v_vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    u_vals[i] = x.value(i) + w_noise[i];
    v_vals[i] = x.value(i) - w_noise[i];
  }
  Series u(u_vals);

  AggregateDetail detail;
  for (const OmegaIndex& w : enumerate_omega(k, n)) {
    if (omega_fittable(w, n)) detail.omegas.push_back(w);
  }

  // Candidate fits share the prefix/suffix solution paths for each split, so
  // compute each path once.
  std::vector<std::optional<ReducedPath>> prefix_paths(n + 1);
  std::vector<std::optional<ReducedPath>> suffix_paths(n + 1);
  std::vector<double> residuals;
  residuals.reserve(detail.omegas.size());
  for (const OmegaIndex& w : detail.omegas) {
    std::optional<FitResult> left;
    std::optional<FitResult> right;
    if (w.mode > 0) {
      if (!prefix_paths[w.mode]) {
        Series prefix(std::vector<double>(u_vals.begin(),
                                          u_vals.begin() + static_cast<long>(w.mode)));
        prefix_paths[w.mode] = fit_all_k(prefix);
      }
      Series prefix(std::vector<double>(u_vals.begin(),
                                        u_vals.begin() + static_cast<long>(w.mode)));
      left = fit_from_path(*prefix_paths[w.mode], prefix, w.left_pieces);
    }
    if (w.mode < n) {
      if (!suffix_paths[w.mode]) {
        suffix_paths[w.mode] = fit_all_k(negated(u_vals, w.mode, n));
      }
      Series suffix = negated(u_vals, w.mode, n);
      right = fit_from_path(*suffix_paths[w.mode], suffix, w.right_pieces);
    }
    FitResult cand = assemble(u, w, left, right, "unimodal-mode");
    std::vector<double> dense = cand.fit.dense();
    KahanSum r;
    for (std::size_t i = 0; i < n; ++i) {
      double d = v_vals[i] - dense[i];
      r.add(d * d);
    }
    residuals.push_back(r.value());
    detail.fits.push_back(std::move(dense));
  }

  detail.weights = softmax_weights(residuals, 8.0 * sigma * sigma);

  std::vector<double> agg(n, 0.0);
  for (std::size_t c = 0; c < detail.fits.size(); ++c) {
    double lw = detail.weights[c];
    for (std::size_t i = 0; i < n; ++i) {
      agg[i] += lw * detail.fits[c][i];
    }
  }
  StepFunction fit = StepFunction::from_dense(agg);
  double rss = sse(fit, x);
  std::size_t pieces = fit.pieces();
  detail.result = FitResult{std::move(fit), rss, pieces, std::nullopt, "unimodal-aggregate"};
  return detail;
}

FitResult unimodal_aggregate(const Series& x, std::size_t k, double sigma,
                             std::uint64_t seed) {
  return unimodal_aggregate_detail(x, k, sigma, seed).result;
}

}  // namespace riso
