#pragma once

#include <cstddef>
#include <vector>

#include "series.hpp"

namespace riso {

/// Solution path of the reduced isotonic problem: for every piece budget k
/// the exact least-squares nondecreasing fit with at most k pieces.
///
/// The optimum for each k places its breakpoints on a subset of the knots of
/// the full isotonic (PAVA) fit and uses plain block means, so a dynamic
/// program over those knots solves every budget exactly in O(n + m^3) time
/// for m = number of PAVA blocks.
///
/// Tables are triangular over 1 <= k <= j <= m, where j indexes the PAVA
/// knot prefix t_1 < ... < t_j:
///   t_loss(k, j)   = minimal SSE of a k-piece fit of x over (0, t_j]
///   left_knot(k,j) = PAVA-knot index of the last interior breakpoint chosen
///                    (ties broken toward the smallest index)
struct ReducedPath {
  FitResult pava;                        // full isotonic fit (budget >= m)
  std::vector<std::size_t> pava_knots;   // t_1..t_m, 1-based data positions
  std::size_t n = 0;
  std::size_t n_blocks = 0;              // m

  std::vector<double> t_loss;            // triangular, see index()
  std::vector<std::size_t> left_knot;
  std::vector<std::vector<std::size_t>> knot_sets;  // knot_sets[k-1] = breakpoints of the k-piece optimum, k <= m

  std::size_t index(std::size_t k, std::size_t j) const noexcept {
    // Row k (1-based) stores entries j = k..m.
    std::size_t row_start = (k - 1) * n_blocks - (k - 1) * (k - 2) / 2;
    return row_start + (j - k);
  }

  double loss(std::size_t k, std::size_t j) const { return t_loss[index(k, j)]; }

  /// Minimal SSE for budget k (saturates at the PAVA residual for k >= m).
  double loss_at(std::size_t k) const;

  /// Breakpoints of the optimal fit for budget k (1-based data positions).
  const std::vector<std::size_t>& knots_for(std::size_t k) const;
};

/// Run PAVA, then fill the whole table.  Requires unit weights.
ReducedPath fit_all_k(const Series& x);

/// Extract the fit for one budget from a precomputed path.
FitResult fit_from_path(const ReducedPath& path, const Series& x, std::size_t k);

/// Convenience: fit_all_k + extraction for a single budget.
FitResult fit_k(const Series& x, std::size_t k);

/// Exhaustive check: enumerate every partition of 1..n into at most k
/// consecutive blocks, pool the block means into nondecreasing order, and
/// keep the best SSE.  n <= 16.  Exponential; testing only.
FitResult brute_force_oracle(const Series& x, std::size_t k);

}  // namespace riso
