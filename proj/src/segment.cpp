#include "segment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "kahan.hpp"

namespace riso {

double SegmentTable::loss_at(std::size_t k) const {
  if (k < 1 || k > k_max) {
    raise(ErrorKind::Argument, "piece budget outside [1, k_max]");
  }
  return loss_cell(std::min(k, n), n);
}

std::vector<std::size_t> SegmentTable::breakpoints_for(std::size_t k) const {
  if (k < 1 || k > k_max) {
    raise(ErrorKind::Argument, "piece budget outside [1, k_max]");
  }
  std::size_t kk = std::min(k, n);
  std::vector<std::size_t> out(kk);
  std::size_t j = n;
  for (std::size_t level = kk; level >= 1; --level) {
    out[level - 1] = j;
    if (level > 1) {
      j = split[(level - 1) * (n + 1) + j];
    }
  }
  return out;
}

SegmentTable segment_fit_all_k(const Series& x, std::size_t k_max) {
  const std::size_t n = x.size();
  if (k_max < 1 || k_max > n) {
    raise(ErrorKind::Argument, "k_max outside [1, n]");
  }
  SegmentTable tab;
  tab.n = n;
  tab.k_max = k_max;

  std::vector<double> sw(n + 1, 0.0), swx(n + 1, 0.0), swxx(n + 1, 0.0);
  KahanSum aw, awx, awxx;
  for (std::size_t i = 0; i < n; ++i) {
    double w = x.weight(i), v = x.value(i);
    aw.add(w);
    awx.add(w * v);
    awxx.add(w * v * v);
    sw[i + 1] = aw.value();
    swx[i + 1] = awx.value();
    swxx[i + 1] = awxx.value();
  }
  auto cost = [&](std::size_t l, std::size_t j) {
    double d = swx[j] - swx[l];
    double v = swxx[j] - swxx[l] - d * d / (sw[j] - sw[l]);
    return v > 0.0 ? v : 0.0;
  };

  std::size_t rows = std::min(k_max, n);
  tab.loss.assign(rows * (n + 1), 0.0);
  tab.split.assign(rows * (n + 1), 0);
  for (std::size_t j = 1; j <= n; ++j) {
    tab.loss[j] = cost(0, j);
  }
  for (std::size_t k = 2; k <= rows; ++k) {
    double* row = &tab.loss[(k - 1) * (n + 1)];
    const double* prev = &tab.loss[(k - 2) * (n + 1)];
    std::size_t* back = &tab.split[(k - 1) * (n + 1)];
    for (std::size_t j = k; j <= n; ++j) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = k - 1;
      for (std::size_t l = k - 1; l < j; ++l) {
        double cand = prev[l] + cost(l, j);
        if (cand < best) {
          best = cand;
          arg = l;
        }
      }
      row[j] = best;
      back[j] = arg;
    }
  }
  return tab;
}

FitResult segment_fit(const Series& x, std::size_t k) {
  if (k < 1) {
    raise(ErrorKind::Argument, "piece budget must be at least 1");
  }
  std::size_t kk = std::min(k, x.size());
  SegmentTable tab = segment_fit_all_k(x, kk);
  StepFunction fit = project_to_blocks(x, tab.breakpoints_for(kk));
  double rss = sse(fit, x);
  std::size_t pieces = fit.pieces();
  return FitResult{std::move(fit), rss, pieces, std::nullopt, "segment"};
}

double pen_segment(std::size_t k, std::size_t n, double tau) {
  if (k < 1 || k > n) {
    raise(ErrorKind::Argument, "penalty piece count outside [1, n]");
  }
  if (tau < 0.0) {
    raise(ErrorKind::Argument, "tau must be nonnegative");
  }
  double nn = static_cast<double>(n);
  if (k == 1) {
    return tau;
  }
  if (k == 2) {
    return tau * std::log(std::log(16.0 * nn));
  }
  double kk = static_cast<double>(k);
  return tau * kk * std::log(std::exp(1.0) * nn / kk);
}

SelectResult segment_select_k(const Series& x, double tau, std::size_t k_max) {
  if (tau < 0.0) {
    raise(ErrorKind::Argument, "tau must be nonnegative");
  }
  const std::size_t n = x.size();
  if (k_max < 1 || k_max > n) {
    raise(ErrorKind::Argument, "k_max outside [1, n]");
  }
  SegmentTable tab = segment_fit_all_k(x, k_max);
  double best = std::numeric_limits<double>::infinity();
  std::size_t k_hat = 1;
  for (std::size_t k = 1; k <= k_max; ++k) {
    double obj = tab.loss_at(k) + pen_segment(k, n, tau);
    if (obj < best) {
      best = obj;
      k_hat = k;
    }
  }
  StepFunction fit = project_to_blocks(x, tab.breakpoints_for(k_hat));
  double rss = sse(fit, x);
  std::size_t pieces = fit.pieces();
  double pk = pen_segment(k_hat, n, tau);
  FitResult res{std::move(fit), rss, pieces, pk, "segment"};
  return SelectResult{std::move(res), k_hat, rss + pk, tau, 0.0};
}

}  // namespace riso
