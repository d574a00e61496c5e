#pragma once

#include <cmath>
#include <span>

namespace adm::detail {

// Neumaier compensated summation; +infinity is absorbing.
class Summation {
 public:
  void add(double x) {
    if (std::isinf(x)) {
      infinite_ = true;
      return;
    }
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return infinite_ ? INFINITY : sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  bool infinite_ = false;
};

inline double sum(std::span<const double> xs) {
  Summation s;
  for (double x : xs) s.add(x);
  return s.value();
}

}  // namespace adm::detail
