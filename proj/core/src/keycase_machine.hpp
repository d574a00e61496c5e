#pragma once

#include "adm/carpenter.hpp"

namespace adm::detail {

// Step-by-step key-case recursion. Holds the carried vector w (weight
// 1 - T_i) and the x coefficients of w in u_1, u_2, ...
class KeycaseMachine {
 public:
  KeycaseMachine(WeightSeq lambda, Vector u1);

  struct Emitted {
    double weight;
    Vector v;
    KeycaseStep step;
  };

  // Mixes the carry with the next fresh vector (weight 1). Vectors are
  // zero-padded to a common dimension.
  Emitted step(const Vector& u_next);

  const Vector& carry() const noexcept { return w_; }
  double carry_weight() const noexcept { return 1.0 - tail(i_); }
  std::size_t steps_done() const noexcept { return i_; }

 private:
  double tail(std::size_t i) const;
  double lambda_at(std::size_t i) const;

  WeightSeq lambda_;
  Vector w_;
  std::vector<Complex> x_;
  std::size_t i_ = 0;
};

}  // namespace adm::detail
