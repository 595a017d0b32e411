#include "series.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "kahan.hpp"

namespace riso {

namespace {

void check_values(const std::vector<double>& values) {
  if (values.empty()) {
    raise(ErrorKind::Dimension, "series must contain at least one value");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      raise(ErrorKind::Argument,
            "series value at position " + std::to_string(i + 1) + " is not finite");
    }
  }
}

}  // namespace

Series::Series(std::vector<double> values) : values_(std::move(values)) {
  check_values(values_);
}

Series::Series(std::vector<double> values, std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
  check_values(values_);
  if (!weights_.empty()) {
    if (weights_.size() != values_.size()) {
      raise(ErrorKind::Dimension, "weights length does not match values length");
    }
    bool all_unit = true;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (!std::isfinite(weights_[i]) || weights_[i] <= 0.0) {
        raise(ErrorKind::Argument,
              "weight at position " + std::to_string(i + 1) + " must be positive and finite");
      }
      all_unit = all_unit && weights_[i] == 1.0;
    }
    if (all_unit) {
      weights_.clear();
    }
  }
}

StepFunction::StepFunction(std::size_t n, std::vector<std::size_t> knots,
                           std::vector<double> levels, Monotone monotone)
    : n_(n), knots_(std::move(knots)), levels_(std::move(levels)), monotone_(monotone) {
  if (n_ == 0) {
    raise(ErrorKind::Dimension, "step function must cover at least one index");
  }
  if (knots_.empty() || knots_.size() != levels_.size()) {
    raise(ErrorKind::Structure, "knots and levels must be nonempty and of equal length");
  }
  if (knots_.back() != n_) {
    raise(ErrorKind::Structure, "last knot must equal the series length");
  }
  for (std::size_t j = 0; j < knots_.size(); ++j) {
    if (knots_[j] < 1 || (j > 0 && knots_[j] <= knots_[j - 1])) {
      raise(ErrorKind::Structure, "knots must be strictly increasing 1-based endpoints");
    }
    if (!std::isfinite(levels_[j])) {
      raise(ErrorKind::Argument, "levels must be finite");
    }
  }
  if (monotone_ == Monotone::None) {
    return;
  }
  // Merge adjacent equal levels, then require strict monotonicity: the piece
  // count of a monotone fit counts distinct steps.
  std::vector<std::size_t> mk;
  std::vector<double> ml;
  for (std::size_t j = 0; j < knots_.size(); ++j) {
    if (!ml.empty() && levels_[j] == ml.back()) {
      mk.back() = knots_[j];
      continue;
    }
    mk.push_back(knots_[j]);
    ml.push_back(levels_[j]);
  }
  for (std::size_t j = 1; j < ml.size(); ++j) {
    bool ok = monotone_ == Monotone::Nondecreasing ? ml[j - 1] < ml[j] : ml[j - 1] > ml[j];
    if (!ok) {
      raise(ErrorKind::Structure, "levels violate the declared monotone direction");
    }
  }
  knots_ = std::move(mk);
  levels_ = std::move(ml);
}

StepFunction StepFunction::from_dense(const std::vector<double>& values) {
  if (values.empty()) {
    raise(ErrorKind::Dimension, "step function must cover at least one index");
  }
  std::vector<std::size_t> knots;
  std::vector<double> levels;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (levels.empty() || values[i] != levels.back()) {
      knots.push_back(i + 1);
      levels.push_back(values[i]);
    } else {
      knots.back() = i + 1;
    }
  }
  return StepFunction(values.size(), std::move(knots), std::move(levels), Monotone::None);
}

double StepFunction::evaluate(std::size_t i) const {
  if (i < 1 || i > n_) {
    raise(ErrorKind::Range, "evaluate index " + std::to_string(i) + " outside [1, " +
                                std::to_string(n_) + "]");
  }
  auto it = std::lower_bound(knots_.begin(), knots_.end(), i);
  return levels_[static_cast<std::size_t>(it - knots_.begin())];
}

std::vector<double> StepFunction::dense() const {
  std::vector<double> out(n_);
  std::size_t start = 0;
  for (std::size_t j = 0; j < knots_.size(); ++j) {
    for (std::size_t i = start; i < knots_[j]; ++i) {
      out[i] = levels_[j];
    }
    start = knots_[j];
  }
  return out;
}

double sse(const StepFunction& fit, const Series& x) {
  if (fit.n() != x.size()) {
    raise(ErrorKind::Dimension, "fit length does not match series length");
  }
  KahanSum acc;
  std::size_t start = 0;
  const auto& knots = fit.knots();
  const auto& levels = fit.levels();
  for (std::size_t j = 0; j < knots.size(); ++j) {
    for (std::size_t i = start; i < knots[j]; ++i) {
      double d = x.value(i) - levels[j];
      acc.add(x.weight(i) * d * d);
    }
    start = knots[j];
  }
  return acc.value();
}

StepFunction project_to_blocks(const Series& x,
                               const std::vector<std::size_t>& breakpoints) {
  if (breakpoints.empty() || breakpoints.back() != x.size()) {
    raise(ErrorKind::Structure, "breakpoints must be nonempty and end at the series length");
  }
  std::vector<double> levels(breakpoints.size());
  std::size_t start = 0;
  for (std::size_t j = 0; j < breakpoints.size(); ++j) {
    std::size_t end = breakpoints[j];
    if (end < 1 || end <= start || end > x.size()) {
      raise(ErrorKind::Structure, "breakpoints must be strictly increasing 1-based endpoints");
    }
    KahanSum num;
    KahanSum den;
    for (std::size_t i = start; i < end; ++i) {
      num.add(x.weight(i) * x.value(i));
      den.add(x.weight(i));
    }
    levels[j] = num.value() / den.value();
    start = end;
  }
  return StepFunction(x.size(), breakpoints, std::move(levels), Monotone::None);
}

}  // namespace riso
