#include <algorithm>
#include <cmath>
#include <string>

#include "adm/carpenter.hpp"
#include "adm/error.hpp"
#include "keycase_machine.hpp"

namespace adm {

namespace detail {

KeycaseMachine::KeycaseMachine(WeightSeq lambda, Vector u1) : lambda_(std::move(lambda)), w_(std::move(u1)) {
  const double total = lambda_.total();
  require(std::isfinite(total) && total < 1.0, Reason::precondition, "key case needs sum(lambda) < 1");
  x_.push_back(1.0);
}

double KeycaseMachine::tail(std::size_t i) const {
  if (lambda_.has_finite_length() && i >= lambda_.length().value()) return 0.0;
  return lambda_.tail_sum(i);
}

double KeycaseMachine::lambda_at(std::size_t i) const {
  if (lambda_.has_finite_length() && i >= lambda_.length().value()) return 0.0;
  return lambda_.at(i);
}

KeycaseMachine::Emitted KeycaseMachine::step(const Vector& u_next) {
  const Eigen::Index dim = std::max(w_.size(), u_next.size());
  if (w_.size() < dim) w_ = pad(w_, dim);
  const Vector u = u_next.size() < dim ? pad(u_next, dim) : u_next;

  const std::size_t i = i_;
  const double t_before = tail(i);
  const double t_after = tail(i + 1);
  const double lam = lambda_at(i);

  KeycaseStep rec;
  rec.n = i + 1;
  rec.tail_before = t_before;
  rec.tail_after = t_after;

  Emitted out{1.0 - lam, Vector(), {}};
  if (t_before == 0.0) {
    // Nothing left to spread: the carry is a full projection already.
    out.v = w_;
    w_ = u;
    rec.sigma = 0.0;
    rec.tau = 1.0;
    rec.sigma_bound = 0.0;
  } else {
    MixResult m = mix_two(1.0 - t_before, 1.0, UnitVec(w_), UnitVec(u), 1.0 - t_after, 1.0 - lam, -t_before, -t_after);
    out.v = m.w_prime.coords();
    w_ = m.w.coords();
    rec.sigma = m.sigma;
    rec.tau = m.tau;
    rec.sigma_bound = (1.0 - t_before) * t_after / (t_before * (1.0 - t_after));
    require(std::norm(m.sigma) <= rec.sigma_bound + 1e-12, Reason::assertion,
            "key case step " + std::to_string(rec.n) + ": |sigma|^2 = " + std::to_string(std::norm(m.sigma)) +
                " exceeds its bound " + std::to_string(rec.sigma_bound));
  }

  for (auto& c : x_) c *= rec.sigma;
  x_.push_back(rec.tau);
  double nrm = 0.0;
  for (const auto& c : x_) nrm += std::norm(c);
  rec.x = x_;
  rec.x_norm = std::sqrt(nrm);
  require(rec.x_norm <= 1.0 + 1e-12, Reason::assertion,
          "key case step " + std::to_string(rec.n) + ": ||x|| = " + std::to_string(rec.x_norm) + " > 1");

  // x now holds w in u_1..u_{i+2}; entries before the last obey the decay bound.
  rec.decay_excess = -INFINITY;
  for (std::size_t k = 0; k + 1 < x_.size(); ++k) {
    const double tk = tail(k);
    if (tk == 0.0) continue;
    const double bound = (1.0 - tk) * t_after / (tk * (1.0 - t_after));
    rec.decay_excess = std::max(rec.decay_excess, std::norm(x_[k]) - bound);
  }
  require(rec.decay_excess <= 1e-12, Reason::assertion,
          "key case step " + std::to_string(rec.n) + ": coefficient decay bound violated");

  ++i_;
  out.step = std::move(rec);
  return out;
}

}  // namespace detail

KeycaseResult keycase_recursion(const WeightSeq& lambda, const ProjectionStream& u, std::size_t stages, double tol) {
  if (auto n = u.size()) {
    require(*n >= stages + 1, Reason::out_of_range, "stream too short for the requested stages");
  }
  detail::KeycaseMachine km(lambda, u.vector(0).coords());

  Eigen::Index dim = u.support_end(0);
  Matrix target = Matrix::Zero(dim, dim);
  Matrix emitted = Matrix::Zero(dim, dim);
  {
    const Vector u1 = u.vector(0).coords();
    target += km.carry_weight() * u1 * u1.adjoint();
  }

  std::vector<std::pair<double, Vector>> terms;
  KeycaseResult res{RankOneDecomp(), {}, UnitVec(km.carry()), km.carry_weight(), 0.0};
  for (std::size_t s = 0; s < stages; ++s) {
    const Eigen::Index need = u.support_end(s + 1);
    if (need > dim) {
      target = pad(target, need);
      emitted = pad(emitted, need);
      dim = need;
    }
    const Vector un = u.vector(s + 1, dim).coords();
    target += un * un.adjoint();
    auto e = km.step(un);
    const Vector v = pad(e.v, dim);
    emitted += e.weight * v * v.adjoint();
    const Vector w = pad(km.carry(), dim);
    const Matrix carried = km.carry_weight() * w * w.adjoint();
    e.step.residual = (emitted + carried - target).norm();
    require(e.step.residual <= tol, Reason::assertion,
            "key case step " + std::to_string(e.step.n) + ": identity residual " + std::to_string(e.step.residual));
    res.max_residual = std::max(res.max_residual, e.step.residual);
    terms.emplace_back(e.weight, v);
    res.steps.push_back(std::move(e.step));
  }
  RankOneDecomp prefix(dim);
  for (auto& [wt, v] : terms) prefix.add(wt, UnitVec::normalized(pad(v, dim)));
  res.prefix = std::move(prefix);
  res.carry = UnitVec::normalized(pad(km.carry(), dim));
  res.carry_weight = km.carry_weight();
  return res;
}

}  // namespace adm
