#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "reduced.hpp"
#include "series.hpp"

namespace riso {

/// Iterated-logarithm penalty (natural logs):
///   pen(1) = tau,  pen(k) = tau * k * log log(16 n / k)  for 2 <= k <= n.
double pen(std::size_t k, std::size_t n, double tau);

/// Data-driven piece-count probe used by the modified penalty at k = n:
///   l_hat(m) = min{ n, 3m + m sqrt(m+1) (mean over [n-m, n-m/2) minus
///                   mean over (1+m/2, 1+m]) / sqrt(tau) }.
/// Window bounds with m/2 fractional are resolved by the strict integer
/// inequalities.  When 2m > n the two windows collide; returns n.
double l_hat(const Series& x, std::size_t m, double tau);

/// Penalty with a data-driven value at k = n (so that the full isotonic fit
/// can win on long monotone signals):
///   k = 1:         tau
///   2 <= k <= n-1: pen(k, n, tau)
///   k = n:         tau * ( log(e n) + sum over l >= 0 with 2^l <= n/3 of
///                  (l_hat(2^{l+1}) - l_hat(2^l))_+ / 2^{l+1} )
/// clamp_negative keeps each telescoping increment at >= 0 (default).
double modified_pen(const Series& x, std::size_t k, double tau,
                    bool clamp_negative = true);

/// Robust noise scale: median absolute first difference rescaled for
/// Gaussian data, median|x_{i+1} - x_i}| / (0.6745 * sqrt(2)).
double estimate_sigma(const Series& x);

enum class PenaltyFamily { Plain, Modified };

/// How to price candidate piece counts.  tau, if unset, defaults to
/// c_tau * sigma^2 with sigma either given or estimated from the data.
struct PenaltySpec {
  PenaltyFamily family = PenaltyFamily::Plain;
  std::optional<double> tau;
  std::optional<double> sigma;
  // Default multiplier calibrated on well-separated staircases so that the
  // selected piece count matches the truth with high probability; smaller
  // values overfit by one or two pieces on long series.
  double c_tau = 6.0;
};

/// Outcome of penalized selection over the solution path.
struct SelectResult {
  FitResult result;
  std::size_t k_hat = 0;     // selected budget (may exceed the piece count)
  double objective = 0.0;    // sse + penalty at k_hat
  double tau_used = 0.0;
  double sigma_used = 0.0;
};

/// k_hat = argmin over k in [1, n] of loss(k) + penalty(k), ties to the
/// smallest k.  The loss is constant at the PAVA residual beyond the block
/// count, and both penalty families increase on 2..n-1, so the scan covers
/// [1, min(m, n)] plus the k = n endpoint (where the modified family can
/// differ).
SelectResult select_k(const ReducedPath& path, const Series& x,
                      const PenaltySpec& spec);

}  // namespace riso
