#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "series.hpp"

namespace riso {

/// A shape candidate for a k-piece unimodal fit: left_pieces nondecreasing
/// pieces on 1..mode and right_pieces nonincreasing pieces on mode+1..n,
/// with left_pieces + right_pieces = k, left_pieces <= mode and
/// right_pieces <= n - mode.
struct OmegaIndex {
  std::size_t left_pieces = 0;   // u
  std::size_t right_pieces = 0;  // v
  std::size_t mode = 0;          // ell, 0-based split position in [0, n]
};

/// All triples satisfying the constraints above, in lexicographic order of
/// (left_pieces, mode).  At most (n+1)^2 of them.
std::vector<OmegaIndex> enumerate_omega(std::size_t k, std::size_t n);

/// A zero-piece side must actually be empty: left_pieces = 0 forces mode = 0
/// and right_pieces = 0 forces mode = n.  Triples failing this cannot be
/// fitted and are skipped by the aggregator.
bool omega_fittable(const OmegaIndex& w, std::size_t n);

/// Least-squares fit of the given shape: reduced isotonic fit with
/// left_pieces budget on the prefix, reduced antitonic fit with right_pieces
/// budget on the suffix, concatenated (monotone flag none).
FitResult unimodal_fit_mode(const Series& x, const OmegaIndex& w);

/// Exponential-weights softmax over candidate residuals at the given
/// temperature: w_i proportional to exp(-r_i / temperature), stabilized by
/// subtracting the minimum residual first.
std::vector<double> softmax_weights(const std::vector<double>& residuals,
                                    double temperature);

/// Diagnostic view of one aggregation run.
struct AggregateDetail {
  FitResult result;
  std::vector<OmegaIndex> omegas;          // fittable candidates, in order
  std::vector<double> weights;             // same order, sums to 1
  std::vector<std::vector<double>> fits;   // candidate fitted vectors on U
};

/// Sample-split exponential aggregation over all fittable shapes:
/// draw W ~ N(0, sigma^2 I) from the seeded stream, fit every candidate on
/// U = x + W, weight by its squared distance to V = x - W at temperature
/// 8 sigma^2, and return the weighted average (monotone flag none).
AggregateDetail unimodal_aggregate_detail(const Series& x, std::size_t k,
                                          double sigma, std::uint64_t seed);

FitResult unimodal_aggregate(const Series& x, std::size_t k, double sigma,
                             std::uint64_t seed);

}  // namespace riso
