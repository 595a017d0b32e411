#include "pava.hpp"

#include <limits>

#include "errors.hpp"
#include "kahan.hpp"

namespace riso {

namespace {

struct Block {
  double wsum;   // total weight
  double wvsum;  // weighted value sum
  std::size_t end;  // 1-based right endpoint

  double mean() const noexcept { return wvsum / wsum; }
};

}  // namespace

FitResult isotonic_fit(const Series& x) {
  const std::size_t n = x.size();
  std::vector<Block> blocks;
  blocks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double w = x.weight(i);
    blocks.push_back({w, w * x.value(i), i + 1});
    // Pool while the previous block mean strictly exceeds the current one.
    // A tie starts a new block; equal levels are merged at construction.
    while (blocks.size() >= 2 &&
           blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      Block top = blocks.back();
      blocks.pop_back();
      blocks.back().wsum += top.wsum;
      blocks.back().wvsum += top.wvsum;
      blocks.back().end = top.end;
    }
  }
  std::vector<std::size_t> knots(blocks.size());
  std::vector<double> levels(blocks.size());
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    knots[j] = blocks[j].end;
    levels[j] = blocks[j].mean();
  }
  StepFunction fit(n, std::move(knots), std::move(levels), Monotone::Nondecreasing);
  double rss = sse(fit, x);
  std::size_t k = fit.pieces();
  return FitResult{std::move(fit), rss, k, std::nullopt, "isotonic"};
}

FitResult antitonic_fit(const Series& x) {
  std::vector<double> neg(x.size());
  std::vector<double> w(x.size());
  bool unit = x.unit_weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    neg[i] = -x.value(i);
    if (!unit) w[i] = x.weight(i);
  }
  Series flipped = unit ? Series(std::move(neg)) : Series(std::move(neg), std::move(w));
  FitResult iso = isotonic_fit(flipped);
  std::vector<double> levels(iso.fit.levels());
  for (double& v : levels) v = -v;
  StepFunction fit(x.size(), iso.fit.knots(), std::move(levels), Monotone::Nonincreasing);
  double rss = sse(fit, x);
  std::size_t k = fit.pieces();
  return FitResult{std::move(fit), rss, k, std::nullopt, "antitonic"};
}

double minmax_reference(const Series& x, std::size_t i) {
  const std::size_t n = x.size();
  if (i < 1 || i > n) {
    raise(ErrorKind::Range, "minmax index outside [1, n]");
  }
  std::vector<double> sw(n + 1, 0.0);
  std::vector<double> swx(n + 1, 0.0);
  KahanSum aw, awx;
  for (std::size_t t = 0; t < n; ++t) {
    aw.add(x.weight(t));
    awx.add(x.weight(t) * x.value(t));
    sw[t + 1] = aw.value();
    swx[t + 1] = awx.value();
  }
  auto mean = [&](std::size_t u, std::size_t v) {
    return (swx[v] - swx[u - 1]) / (sw[v] - sw[u - 1]);
  };
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t v = i; v <= n; ++v) {
    double inner = -std::numeric_limits<double>::infinity();
    for (std::size_t u = 1; u <= i; ++u) {
      inner = std::max(inner, mean(u, v));
    }
    best = std::min(best, inner);
  }
  return best;
}

}  // namespace riso
