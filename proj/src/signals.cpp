#include "signals.hpp"

#include <cmath>

#include "errors.hpp"

namespace riso {

std::vector<double> staircase_signal(std::size_t n, std::size_t k, double delta) {
  if (n < 1) {
    raise(ErrorKind::Dimension, "signal length must be at least 1");
  }
  if (k < 1 || k > n) {
    raise(ErrorKind::Argument, "block count outside [1, n]");
  }
  if (!std::isfinite(delta)) {
    raise(ErrorKind::Argument, "delta must be finite");
  }
  std::size_t base = n / k;
  std::size_t extra = n % k;  // the last `extra` blocks get one more entry
  std::vector<double> out(n);
  std::size_t pos = 0;
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t len = base + (j >= k - extra ? 1 : 0);
    for (std::size_t i = 0; i < len; ++i) {
      out[pos++] = static_cast<double>(j) * delta;
    }
  }
  return out;
}

std::vector<double> lower_bound_signal(std::size_t n, std::size_t ell,
                                       double alpha, double sigma) {
  if (n < 4) {
    raise(ErrorKind::Dimension, "length must be at least 4");
  }
  double log2n = std::log2(static_cast<double>(n));
  std::size_t max_ell = static_cast<std::size_t>(std::ceil(log2n));
  if (ell < 1 || ell > max_ell) {
    raise(ErrorKind::Argument, "ell outside [1, ceil(log2 n)]");
  }
  if (alpha <= 0.0 || sigma <= 0.0) {
    raise(ErrorKind::Argument, "alpha and sigma must be positive");
  }
  double scale = std::ldexp(1.0, static_cast<int>(ell));  // 2^ell
  std::size_t tail = static_cast<std::size_t>(
      std::ceil(static_cast<double>(n) / scale));
  double level = std::sqrt(alpha * sigma * sigma * scale * std::log(log2n) /
                           static_cast<double>(n));
  std::vector<double> out(n, 0.0);
  for (std::size_t i = n - tail; i < n; ++i) {
    out[i] = level;
  }
  return out;
}

std::vector<double> sample_noise(const NoiseSpec& spec, std::size_t n,
                                 double sigma, RngStream& rng) {
  if (sigma <= 0.0) {
    raise(ErrorKind::Argument, "sigma must be positive");
  }
  std::vector<double> out(n);
  switch (spec.law) {
    case NoiseLaw::Gaussian:
      for (double& v : out) v = rng.normal() * sigma;
      break;
    case NoiseLaw::GenGaussian: {
      double g = spec.gamma;
      if (!(g > 0.0 && g <= 2.0)) {
        raise(ErrorKind::Argument, "gamma outside (0, 2]");
      }
      // X = s * sign * G^{1/gamma} with G ~ Gamma(1/gamma, 1) has density
      // proportional to exp(-|x/s|^gamma); s^2 = Gamma(1/g)/Gamma(3/g) makes
      // the standardized variance 1.
      double s = std::exp(0.5 * (std::lgamma(1.0 / g) - std::lgamma(3.0 / g)));
      for (double& v : out) {
        double draw = rng.gamma(1.0 / g);
        double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
        v = sign * std::pow(draw, 1.0 / g) * s * sigma;
      }
      break;
    }
    case NoiseLaw::Uniform: {
      double half = std::sqrt(3.0);
      for (double& v : out) v = (2.0 * rng.uniform01() - 1.0) * half * sigma;
      break;
    }
  }
  return out;
}

std::vector<double> sample_noise(const NoiseSpec& spec, std::size_t n,
                                 double sigma, std::uint64_t seed) {
  RngStream rng(derive_key(seed, {0}));
  return sample_noise(spec, n, sigma, rng);
}

}  // namespace riso
