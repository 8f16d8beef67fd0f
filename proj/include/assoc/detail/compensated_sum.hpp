#pragma once

#include <cmath>

namespace assoc::detail {

// Neumaier's variant of Kahan summation. Deterministic for a fixed input
// order; requires that the compiler not contract or reassociate.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace assoc::detail
