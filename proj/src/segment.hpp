#pragma once

#include <cstddef>
#include <vector>

#include "model_select.hpp"
#include "series.hpp"

namespace riso {

/// Exact least-squares segmentation into at most k consecutive blocks with
/// unconstrained levels.  Classical O(n^2 k) dynamic program over all split
/// positions; no monotonicity, so the breakpoints are not restricted to the
/// isotonic knots.
struct SegmentTable {
  std::size_t n = 0;
  std::size_t k_max = 0;  // rows actually filled: min(k_max, n)

  std::vector<double> loss;         // loss[(k-1)*(n+1) + j], j = 0..n
  std::vector<std::size_t> split;   // previous breakpoint for that state

  double loss_cell(std::size_t k, std::size_t j) const {
    return loss[(k - 1) * (n + 1) + j];
  }

  /// Minimal SSE for budget k (saturates at 0 for k >= n).
  double loss_at(std::size_t k) const;

  /// Breakpoints (1-based right endpoints) of the budget-k optimum, built by
  /// walking the backpointers; exactly min(k, n) blocks.
  std::vector<std::size_t> breakpoints_for(std::size_t k) const;
};

SegmentTable segment_fit_all_k(const Series& x, std::size_t k_max);

/// Fit for a single budget; levels are the plain block means (flag none).
FitResult segment_fit(const Series& x, std::size_t k);

/// Penalty for unordered segmentation:
///   k = 1: tau,  k = 2: tau * log log(16 n),  k >= 3: tau * k * log(e n / k).
double pen_segment(std::size_t k, std::size_t n, double tau);

/// argmin over k in [1, k_max] of SSE(k) + pen_segment(k), ties to the
/// smallest k.
SelectResult segment_select_k(const Series& x, double tau, std::size_t k_max);

}  // namespace riso
