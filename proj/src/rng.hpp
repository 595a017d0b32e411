#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace riso {

/// SplitMix64 step; used both as a mixer for stream keys and to seed the
/// per-stream engine.
inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derive an independent stream key from a master seed and a path of
/// indices (experiment, grid position, replication, ...).  Each component is
/// folded through SplitMix64 so neighbouring paths decorrelate; the same
/// (seed, path) always yields the same key regardless of thread schedule.
inline std::uint64_t derive_key(std::uint64_t seed,
                                std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t state = seed;
  (void)splitmix64(state);
  for (std::uint64_t p : path) {
    state ^= splitmix64(state) + p;
    (void)splitmix64(state);
  }
  return splitmix64(state);
}

/// One reproducible random stream: a Mersenne Twister engine keyed by
/// derive_key.  All samplers draw standardized variates; callers scale by
/// sigma afterwards so that scaling the noise level rescales identical draws
/// bit-for-bit.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : engine_(key) {}

  double uniform01() { return uniform_(engine_); }

  double normal() { return normal_(engine_); }

  double gamma(double shape) {
    std::gamma_distribution<double> g(shape, 1.0);
    return g(engine_);
  }

  std::uint64_t uniform_index(std::uint64_t lo, std::uint64_t hi) {
    std::uniform_int_distribution<std::uint64_t> d(lo, hi);
    return d(engine_);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace riso
