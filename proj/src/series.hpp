#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace riso {

/// Finite series x_1..x_n with optional positive observation weights.
/// Indices are 1-based throughout to match the block notation (a:b] used by
/// the fitting routines; storage is 0-based.
class Series {
 public:
  explicit Series(std::vector<double> values);
  Series(std::vector<double> values, std::vector<double> weights);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }

  /// True when no explicit weights were given or all weights equal 1.
  bool unit_weights() const noexcept { return weights_.empty(); }

  /// Weight of observation i (0-based storage index).
  double weight(std::size_t i) const noexcept {
    return weights_.empty() ? 1.0 : weights_[i];
  }

  double value(std::size_t i) const noexcept { return values_[i]; }

 private:
  std::vector<double> values_;
  std::vector<double> weights_;  // empty means all ones
};

enum class Monotone { None, Nondecreasing, Nonincreasing };

/// Piecewise-constant function on {1..n}: value levels_[j] on the block
/// (knots_[j-1], knots_[j]] with knots_ the 1-based right endpoints and the
/// last knot equal to n.  When a monotone flag is set, adjacent equal levels
/// are merged at construction so the levels are strictly monotone and the
/// piece count equals the number of distinct steps.
class StepFunction {
 public:
  /// Empty placeholder (n = 0); only valid as an assignment target.
  StepFunction() noexcept : n_(0), monotone_(Monotone::None) {}

  StepFunction(std::size_t n, std::vector<std::size_t> knots,
               std::vector<double> levels, Monotone monotone);

  /// Run-length compression of a dense vector; monotone flag none.
  static StepFunction from_dense(const std::vector<double>& values);

  /// Value at 1-based index i.  Binary search over knots.
  double evaluate(std::size_t i) const;

  /// Materialise the fitted vector of length n.
  std::vector<double> dense() const;

  std::size_t n() const noexcept { return n_; }
  std::size_t pieces() const noexcept { return knots_.size(); }
  const std::vector<std::size_t>& knots() const noexcept { return knots_; }
  const std::vector<double>& levels() const noexcept { return levels_; }
  Monotone monotone() const noexcept { return monotone_; }

 private:
  std::size_t n_;
  std::vector<std::size_t> knots_;
  std::vector<double> levels_;
  Monotone monotone_;
};

/// A fitted step function together with its residual sum of squares against
/// the data it was fitted to.  penalty is set only by the penalized model
/// selectors.
struct FitResult {
  StepFunction fit;
  double sse = 0.0;
  std::size_t k_used = 0;
  std::optional<double> penalty;
  std::string method;
};

/// Weighted residual sum of squares sum_i w_i (x_i - fit(i))^2.
double sse(const StepFunction& fit, const Series& x);

/// Fit the weighted mean on each block of the given partition.  breakpoints
/// are 1-based right endpoints, strictly increasing, ending at n.  Adjacent
/// equal means are kept as separate pieces (monotone flag none).
StepFunction project_to_blocks(const Series& x,
                               const std::vector<std::size_t>& breakpoints);

}  // namespace riso
