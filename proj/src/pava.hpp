#pragma once

#include <cstddef>

#include "series.hpp"

namespace riso {

/// Weighted least-squares isotonic (nondecreasing) fit by pool-adjacent-
/// violators.  O(n) via a stack of blocks.  Equal adjacent block means are
/// merged so the result has strictly increasing levels.
FitResult isotonic_fit(const Series& x);

/// Nonincreasing fit: negate, fit isotonic, negate back.
FitResult antitonic_fit(const Series& x);

/// Independent characterisation of the isotonic fit at 1-based index i:
///   mu_i = min_{v >= i} max_{u <= i} weighted mean of x over [u, v].
/// O(n^2) per index; reference implementation for testing only.
double minmax_reference(const Series& x, std::size_t i);

}  // namespace riso
