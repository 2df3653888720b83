#pragma once

#include <cmath>

namespace xilab {

/// Neumaier (improved Kahan-Babuska) summation.
template <class T>
class CompensatedSum {
 public:
  constexpr void add(T x) noexcept {
    const T t = sum_ + x;
    using std::abs;
    if (abs(sum_) >= abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  constexpr T value() const noexcept { return sum_ + carry_; }

 private:
  T sum_{};
  T carry_{};
};

}  // namespace xilab
