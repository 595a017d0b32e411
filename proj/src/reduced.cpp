#include "reduced.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "kahan.hpp"
#include "pava.hpp"

namespace riso {

double ReducedPath::loss_at(std::size_t k) const {
  if (k < 1) {
    raise(ErrorKind::Argument, "piece budget must be at least 1");
  }
  return loss(std::min(k, n_blocks), n_blocks);
}

const std::vector<std::size_t>& ReducedPath::knots_for(std::size_t k) const {
  if (k < 1) {
    raise(ErrorKind::Argument, "piece budget must be at least 1");
  }
  return knot_sets[std::min(k, n_blocks) - 1];
}

ReducedPath fit_all_k(const Series& x) {
  if (!x.unit_weights()) {
    raise(ErrorKind::Unsupported, "reduced fitting requires unit weights");
  }
  ReducedPath path;
  path.n = x.size();
  path.pava = isotonic_fit(x);
  path.pava_knots = path.pava.fit.knots();
  const std::size_t m = path.pava_knots.size();
  path.n_blocks = m;

  // Prefix sums of x and x^2 at the knot positions (S[0] = SS[0] = 0).
  std::vector<double> all = prefix_sums(x.values(), [](double v) { return v; });
  std::vector<double> all2 = prefix_sums(x.values(), [](double v) { return v * v; });
  std::vector<double> S(m + 1, 0.0), SS(m + 1, 0.0);
  std::vector<double> T(m + 1, 0.0);  // t_0 = 0, t_j as double for the divisions
  for (std::size_t j = 1; j <= m; ++j) {
    S[j] = all[path.pava_knots[j - 1]];
    SS[j] = all2[path.pava_knots[j - 1]];
    T[j] = static_cast<double>(path.pava_knots[j - 1]);
  }

  // SSE of one mean fitted on the block (t_l, t_j]; nonnegative by
  // construction, clamped against cancellation.
  auto block_loss = [&](std::size_t l, std::size_t j) {
    double d = S[j] - S[l];
    double v = SS[j] - SS[l] - d * d / (T[j] - T[l]);
    return v > 0.0 ? v : 0.0;
  };

  std::size_t table = m * (m + 1) / 2;
  path.t_loss.assign(table, 0.0);
  path.left_knot.assign(table, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    path.t_loss[path.index(1, j)] = block_loss(0, j);
  }
  for (std::size_t k = 2; k <= m; ++k) {
    for (std::size_t j = k; j <= m; ++j) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = k - 1;
      for (std::size_t l = k - 1; l < j; ++l) {
        double cand = path.t_loss[path.index(k - 1, l)] + block_loss(l, j);
        if (cand < best) {
          best = cand;
          arg = l;
        }
      }
      path.t_loss[path.index(k, j)] = best;
      path.left_knot[path.index(k, j)] = arg;
    }
  }

  // Backtrack the breakpoint set for every budget.
  path.knot_sets.resize(m);
  for (std::size_t k = 1; k <= m; ++k) {
    std::vector<std::size_t> idx(k);
    idx[k - 1] = m;
    for (std::size_t j = k - 1; j >= 1; --j) {
      idx[j - 1] = path.left_knot[path.index(j + 1, idx[j])];
    }
    std::vector<std::size_t>& out = path.knot_sets[k - 1];
    out.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      out[j] = path.pava_knots[idx[j] - 1];
    }
  }
  return path;
}

FitResult fit_from_path(const ReducedPath& path, const Series& x, std::size_t k) {
  if (k < 1) {
    raise(ErrorKind::Argument, "piece budget must be at least 1");
  }
  if (path.n != x.size()) {
    raise(ErrorKind::Dimension, "path does not match series length");
  }
  if (k >= path.n_blocks) {
    FitResult out = path.pava;
    out.method = "reduced";
    return out;
  }
  const std::vector<std::size_t>& breaks = path.knots_for(k);
  StepFunction raw = project_to_blocks(x, breaks);
  std::vector<double> levels = raw.levels();
  bool increasing = true;
  for (std::size_t j = 1; j < levels.size(); ++j) {
    increasing = increasing && levels[j - 1] < levels[j];
  }
  if (!increasing) {
    // The optimum is guaranteed nondecreasing; if rounding in the table ever
    // produces a violating extraction, repair it by pooling the block means.
    std::vector<double> w(breaks.size());
    std::size_t start = 0;
    for (std::size_t j = 0; j < breaks.size(); ++j) {
      w[j] = static_cast<double>(breaks[j] - start);
      start = breaks[j];
    }
    FitResult pooled = isotonic_fit(Series(levels, w));
    levels = pooled.fit.dense();
  }
  StepFunction fit(x.size(), breaks, std::move(levels), Monotone::Nondecreasing);
  double rss = sse(fit, x);
  std::size_t pieces = fit.pieces();
  return FitResult{std::move(fit), rss, pieces, std::nullopt, "reduced"};
}

FitResult fit_k(const Series& x, std::size_t k) {
  return fit_from_path(fit_all_k(x), x, k);
}

FitResult brute_force_oracle(const Series& x, std::size_t k) {
  const std::size_t n = x.size();
  if (n > 16) {
    raise(ErrorKind::Size, "oracle limited to n <= 16");
  }
  if (k < 1) {
    raise(ErrorKind::Argument, "piece budget must be at least 1");
  }
  double best_sse = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_breaks;
  std::vector<double> best_levels;

  const std::size_t cuts = n - 1;
  for (std::size_t mask = 0; mask < (std::size_t{1} << cuts); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) + 1 > k) continue;
    std::vector<std::size_t> breaks;
    for (std::size_t c = 0; c < cuts; ++c) {
      if (mask & (std::size_t{1} << c)) breaks.push_back(c + 1);
    }
    breaks.push_back(n);

    std::vector<double> means(breaks.size());
    std::vector<double> bw(breaks.size());
    std::size_t start = 0;
    for (std::size_t j = 0; j < breaks.size(); ++j) {
      KahanSum num, den;
      for (std::size_t i = start; i < breaks[j]; ++i) {
        num.add(x.weight(i) * x.value(i));
        den.add(x.weight(i));
      }
      means[j] = num.value() / den.value();
      bw[j] = den.value();
      start = breaks[j];
    }
    // Monotone levels: pool the block means by weighted isotonic regression.
    FitResult pooled = isotonic_fit(Series(means, bw));
    std::vector<double> levels = pooled.fit.dense();

    KahanSum acc;
    start = 0;
    for (std::size_t j = 0; j < breaks.size(); ++j) {
      for (std::size_t i = start; i < breaks[j]; ++i) {
        double d = x.value(i) - levels[j];
        acc.add(x.weight(i) * d * d);
      }
      start = breaks[j];
    }
    double cand = acc.value();
    if (cand < best_sse) {
      best_sse = cand;
      best_breaks = breaks;
      best_levels = levels;
    }
  }
  StepFunction fit(n, std::move(best_breaks), std::move(best_levels),
                   Monotone::Nondecreasing);
  double rss = sse(fit, x);
  std::size_t pieces = fit.pieces();
  return FitResult{std::move(fit), rss, pieces, std::nullopt, "oracle"};
}

}  // namespace riso
