#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace riso {

/// Neumaier-compensated accumulator.  Used for every prefix sum and block
/// mean so that fits on long series do not drift with plain summation.
class KahanSum {
 public:
  void add(double v) noexcept {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Compensated prefix sums: out[i] = sum of values[0..i), out[0] = 0.
template <typename F>
std::vector<double> prefix_sums(const std::vector<double>& values, F&& transform) {
  std::vector<double> out(values.size() + 1);
  KahanSum acc;
  out[0] = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    acc.add(transform(values[i]));
    out[i + 1] = acc.value();
  }
  return out;
}

}  // namespace riso
