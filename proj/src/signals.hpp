#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rng.hpp"

namespace riso {

/// Nondecreasing staircase with k blocks of near-equal length (remainder
/// spread over the last blocks) and levels 0, delta, 2*delta, ...
std::vector<double> staircase_signal(std::size_t n, std::size_t k, double delta);

/// Two-piece signal that is hard for the full isotonic fit: zeros followed
/// by ceil(n 2^-ell) entries at sqrt(alpha sigma^2 2^ell log(log2 n) / n).
/// Requires n >= 4 and 1 <= ell <= ceil(log2 n).
std::vector<double> lower_bound_signal(std::size_t n, std::size_t ell,
                                       double alpha, double sigma);

enum class NoiseLaw { Gaussian, GenGaussian, Uniform };

/// GenGaussian has density proportional to exp(-|x/s|^gamma) with s chosen
/// so the variance is sigma^2; gamma in (0, 2], gamma = 2 recovers the
/// Gaussian and gamma = 1 the Laplace law.  Uniform is the centered uniform
/// law with variance sigma^2.
struct NoiseSpec {
  NoiseLaw law = NoiseLaw::Gaussian;
  double gamma = 2.0;
};

/// n standardized draws scaled by sigma, taken from the given stream.
/// Standardized draws do not depend on sigma, so samples at sigma = c are
/// exactly c times the samples at sigma = 1 for the same stream state.
std::vector<double> sample_noise(const NoiseSpec& spec, std::size_t n,
                                 double sigma, RngStream& rng);

/// Convenience overload drawing from a fresh stream keyed by seed.
std::vector<double> sample_noise(const NoiseSpec& spec, std::size_t n,
                                 double sigma, std::uint64_t seed);

}  // namespace riso
