#include "model_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "kahan.hpp"

namespace riso {

double pen(std::size_t k, std::size_t n, double tau) {
  if (k < 1 || k > n) {
    raise(ErrorKind::Argument, "penalty piece count outside [1, n]");
  }
  if (tau < 0.0) {
    raise(ErrorKind::Argument, "tau must be nonnegative");
  }
  if (k == 1) {
    return tau;
  }
  double kk = static_cast<double>(k);
  return tau * kk * std::log(std::log(16.0 * static_cast<double>(n) / kk));
}

namespace {

// Mean of x over the integer window {i : lo < i <= hi} or {i : lo <= i < hi}
// with possibly fractional bounds; 1-based indices.
double window_mean(const Series& x, double lo, double hi, bool open_left) {
  KahanSum num;
  double count = 0.0;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    double d = static_cast<double>(i);
    bool in = open_left ? (d > lo && d <= hi) : (d >= lo && d < hi);
    if (in) {
      num.add(x.value(i - 1));
      count += 1.0;
    }
  }
  if (count == 0.0) {
    raise(ErrorKind::Argument, "empty probe window");
  }
  return num.value() / count;
}

}  // namespace

double l_hat(const Series& x, std::size_t m, double tau) {
  const std::size_t n = x.size();
  if (m < 1) {
    raise(ErrorKind::Argument, "window size must be at least 1");
  }
  if (tau <= 0.0) {
    raise(ErrorKind::Argument, "tau must be positive");
  }
  double nn = static_cast<double>(n);
  if (2 * m > n) {
    return nn;  // windows overlap; the probe is uninformative
  }
  double md = static_cast<double>(m);
  double upper = window_mean(x, nn - md, nn - md / 2.0, /*open_left=*/false);
  double lower = window_mean(x, 1.0 + md / 2.0, 1.0 + md, /*open_left=*/true);
  double probe = 3.0 * md + md * std::sqrt(md + 1.0) * (upper - lower) / std::sqrt(tau);
  return std::min(nn, probe);
}

double modified_pen(const Series& x, std::size_t k, double tau, bool clamp_negative) {
  const std::size_t n = x.size();
  if (k < 1 || k > n) {
    raise(ErrorKind::Argument, "penalty piece count outside [1, n]");
  }
  if (tau < 0.0) {
    raise(ErrorKind::Argument, "tau must be nonnegative");
  }
  if (tau == 0.0) {
    return 0.0;
  }
  if (k == 1) {
    return tau;
  }
  if (k < n) {
    return pen(k, n, tau);
  }
  double nn = static_cast<double>(n);
  KahanSum acc;
  acc.add(std::log(std::exp(1.0) * nn));
  for (std::size_t p = 1; p <= n / 3; p *= 2) {
    double inc = l_hat(x, 2 * p, tau) - l_hat(x, p, tau);
    if (clamp_negative && inc < 0.0) {
      inc = 0.0;
    }
    acc.add(inc / static_cast<double>(2 * p));
  }
  return tau * acc.value();
}

double estimate_sigma(const Series& x) {
  const std::size_t n = x.size();
  if (n < 2) {
    raise(ErrorKind::Argument, "sigma estimation needs at least two values");
  }
  std::vector<double> diffs(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    diffs[i] = std::abs(x.value(i + 1) - x.value(i));
  }
  std::size_t mid = diffs.size() / 2;
  std::nth_element(diffs.begin(), diffs.begin() + mid, diffs.end());
  double med = diffs[mid];
  if (diffs.size() % 2 == 0) {
    double below = *std::max_element(diffs.begin(), diffs.begin() + mid);
    med = 0.5 * (below + med);
  }
  return med / (0.6745 * std::sqrt(2.0));
}

SelectResult select_k(const ReducedPath& path, const Series& x,
                      const PenaltySpec& spec) {
  if (path.n != x.size()) {
    raise(ErrorKind::Dimension, "path does not match series length");
  }
  if (spec.c_tau <= 0.0) {
    raise(ErrorKind::Argument, "c_tau must be positive");
  }
  if (spec.tau && *spec.tau <= 0.0) {
    raise(ErrorKind::Argument, "tau must be positive");
  }
  if (spec.sigma && *spec.sigma <= 0.0) {
    raise(ErrorKind::Argument, "sigma must be positive");
  }
  const std::size_t n = x.size();
  double sigma = spec.sigma ? *spec.sigma
                            : (n >= 2 ? estimate_sigma(x) : 0.0);
  double tau = spec.tau ? *spec.tau : spec.c_tau * sigma * sigma;

  auto penalty_at = [&](std::size_t k) {
    return spec.family == PenaltyFamily::Modified ? modified_pen(x, k, tau)
                                                  : pen(k, n, tau);
  };

  double best = std::numeric_limits<double>::infinity();
  std::size_t k_hat = 1;
  std::size_t top = std::min(path.n_blocks, n);
  for (std::size_t k = 1; k <= top; ++k) {
    double obj = path.loss_at(k) + penalty_at(k);
    if (obj < best) {
      best = obj;
      k_hat = k;
    }
  }
  if (n > top) {
    double obj = path.loss_at(n) + penalty_at(n);
    if (obj < best) {
      best = obj;
      k_hat = n;
    }
  }

  FitResult fit = fit_from_path(path, x, k_hat);
  double pk = penalty_at(k_hat);
  fit.penalty = pk;
  double objective = fit.sse + pk;
  return SelectResult{std::move(fit), k_hat, objective, tau, sigma};
}

}  // namespace riso
