#include "adm/carpenter.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>

#include "adm/error.hpp"
#include "keycase_machine.hpp"
#include "summation.hpp"

namespace adm {

namespace {

constexpr double kTraceTol = 1e-10;
constexpr std::size_t kTailChunk = 4;

bool has(const WeightSeq& w, std::size_t j) { return w.length().is_infinite() || j < w.length().value(); }

// Head length m and remainder r for sum(xi) = n: the head sums to n - 1 + r
// with 0 <= r < 1 and the tail carries 1 - r.
struct FiniteHead {
  std::size_t m = 0;
  double r = 0.0;
};

FiniteHead finite_head(const WeightSeq& xi, std::size_t n) {
  FiniteHead h;
  detail::Summation s;
  const double nd = static_cast<double>(n);
  if (xi.has_finite_length()) {
    const std::size_t len = xi.length().value();
    while (h.m < len) {
      detail::Summation next = s;
      next.add(xi.at(h.m));
      if (next.value() >= nd - kTraceTol) break;
      s = next;
      ++h.m;
    }
  } else {
    while (s.value() < nd - 1.0 - kTraceTol) s.add(xi.at(h.m++));
  }
  h.r = std::clamp(s.value() - (nd - 1.0), 0.0, std::nextafter(1.0, 0.0));
  if (h.r < 1e-13) h.r = 0.0;
  return h;
}

std::vector<double> head_eta(std::size_t n, double r) {
  std::vector<double> eta(n > 0 ? n - 1 : 0, 1.0);
  eta.push_back(r);
  return eta;
}

// Running ledger of emitted terms against touched stream vectors. Matrices
// grow with the ambient dimension.
class Realizer {
 public:
  Realizer(const ProjectionStream& stream, std::function<std::size_t(std::size_t)> core_e)
      : stream_(stream), core_e_(std::move(core_e)) {}

  void ensure_dim(Eigen::Index d) {
    if (d <= dim_) return;
    emitted_ = pad(emitted_, d);
    touched_ = pad(touched_, d);
    dim_ = d;
  }

  Eigen::Index dim() const { return dim_; }

  Vector evec(std::size_t stream_idx) {
    ensure_dim(stream_.support_end(stream_idx));
    return stream_.vector(stream_idx, dim_).coords();
  }

  void touch(std::size_t stream_idx) {
    if (!seen_.insert(stream_idx).second) return;
    const Vector e = evec(stream_idx);
    touched_ += e * e.adjoint();
  }

  void emit(double weight, const Vector& v, TermOrigin origin) {
    ensure_dim(v.size());
    const Vector pv = v.size() < dim_ ? pad(v, dim_) : v;
    if (weight != 0.0) emitted_ += weight * pv * pv.adjoint();
    terms_.push_back({weight, v, origin});
  }

  void emit_zero(TermOrigin origin) {
    ensure_dim(1);
    emit(0.0, UnitVec::basis(1, 0).coords(), origin);
  }

  void realize(const BlockPlan& plan) {
    if (!plan.weights.empty()) {
      Eigen::Index need = 1;
      for (auto t : plan.targets) need = std::max(need, stream_.support_end(core_e_(t)));
      ensure_dim(need);
      std::vector<UnitVec> es;
      es.reserve(plan.targets.size());
      for (std::size_t i = 0; i < plan.targets.size(); ++i) {
        es.push_back(UnitVec(evec(core_e_(plan.targets[i]))));
      }
      RankOneDecomp d = horn_decompose(plan.eta, es, plan.weights);
      std::size_t next = 0;
      for (std::size_t i = 0; i < plan.weights.size(); ++i) {
        if (plan.weights[i] > 0.0) emit(plan.weights[i], d[next++].vector.coords(), plan.sources[i]);
      }
      for (std::size_t i = 0; i < plan.targets.size(); ++i) {
        if (plan.eta[i] > 0.0) touch(core_e_(plan.targets[i]));
      }
    }
    for (const auto& t : plan.direct) {
      const std::size_t idx = core_e_(t.target);
      touch(idx);
      emit(t.weight, evec(idx), t.origin);
    }
    outstanding_.clear();
    if (plan.pending > 0.0) {
      const std::size_t idx = core_e_(plan.pending_target);
      touch(idx);
      outstanding_.push_back({plan.pending, evec(idx)});
    }
    frontier_.reset();
    if (plan.frontier_open && plan.r_out > 0.0) frontier_ = {core_e_(plan.frontier), plan.r_out};
  }

  void set_frontier(std::optional<std::pair<std::size_t, double>> f) { frontier_ = f; }
  void set_outstanding(std::vector<std::pair<double, Vector>> o) { outstanding_ = std::move(o); }

  StageCertificate certify(std::size_t stage, CaseKind kind, const BlockPlan& plan) {
    Matrix lhs = emitted_;
    double owed = 0.0;
    for (const auto& [w, v] : outstanding_) {
      const Vector pv = pad(v, dim_);
      lhs += w * pv * pv.adjoint();
      owed += w;
    }
    Matrix rhs = touched_;
    StageCertificate c;
    if (frontier_) {
      touch(frontier_->first);
      const Vector e = evec(frontier_->first);
      rhs = touched_ - (1.0 - frontier_->second) * e * e.adjoint();
      c.frontier_e = frontier_->first;
      lhs = pad(lhs, dim_);
    }
    c.stage = stage;
    c.kind = kind;
    c.plan = plan;
    c.residual = (lhs - rhs).norm();
    Matrix owed_m = Matrix::Zero(dim_, dim_);
    for (const auto& [w, v] : outstanding_) {
      const Vector pv = pad(v, dim_);
      owed_m += w * pv * pv.adjoint();
    }
    last_target_ = rhs - owed_m;
    c.terms_emitted = terms_.size();
    c.e_touched = seen_.size();
    c.remainder = plan.r_out;
    c.outstanding = owed;
    c.ambient_dim = dim_;
    return c;
  }

  struct Term {
    double weight;
    Vector v;
    TermOrigin origin;
  };
  const std::vector<Term>& terms() const { return terms_; }
  const Matrix& last_target() const { return last_target_; }

 private:
  const ProjectionStream& stream_;
  std::function<std::size_t(std::size_t)> core_e_;
  Eigen::Index dim_ = 0;
  Matrix emitted_;
  Matrix touched_;
  std::set<std::size_t> seen_;
  std::vector<Term> terms_;
  std::vector<std::pair<double, Vector>> outstanding_;
  std::optional<std::pair<std::size_t, double>> frontier_;
  Matrix last_target_;
};

// The finite core as one sequence: 1 - lambda first, then mu. When mu is
// infinite the two are interleaved instead so the result stays a closed form.
struct CoreSeq {
  WeightSeq seq;
  std::function<TermOrigin(std::size_t)> origin;
};

CoreSeq finite_core(const SplitSeq& s) {
  std::vector<double> one_minus;
  const std::size_t nl = s.lambda.length().value();
  for (std::size_t j = 0; j < nl; ++j) one_minus.push_back(1.0 - s.lambda.at(j));
  if (s.mu.has_finite_length()) {
    std::vector<double> all = one_minus;
    const std::size_t nm = s.mu.length().value();
    for (std::size_t j = 0; j < nm; ++j) all.push_back(s.mu.at(j));
    return {WeightSeq::finite(std::move(all)), [nl](std::size_t i) {
              return i < nl ? TermOrigin{TermOrigin::Part::lambda, i} : TermOrigin{TermOrigin::Part::mu, i - nl};
            }};
  }
  if (nl == 0) return {s.mu, [](std::size_t i) { return TermOrigin{TermOrigin::Part::mu, i}; }};
  return {WeightSeq::interleave({WeightSeq::finite(one_minus), s.mu}), [nl](std::size_t i) {
            if (i < 2 * nl) {
              return i % 2 == 0 ? TermOrigin{TermOrigin::Part::lambda, i / 2} : TermOrigin{TermOrigin::Part::mu, i / 2};
            }
            return TermOrigin{TermOrigin::Part::mu, i - nl};
          }};
}

CaseTag tag_for(const SplitSeq& s, CaseKind kind) {
  CaseTag tag;
  tag.kind = kind;
  tag.M = s.M();
  tag.N = s.N();
  const double gap = s.lambda.total() - s.mu.total();
  if (std::isfinite(gap) && kind != CaseKind::finite_rank) tag.k = as_integer(gap);
  return tag;
}

}  // namespace

FiniteRankResult decompose_finite_rank(const WeightSeq& xi, std::span<const UnitVec> e, std::size_t tail_terms) {
  const std::size_t n = e.size();
  require(n >= 1, Reason::precondition, "finite-rank decomposition needs at least one vector");
  const double total = xi.total();
  require(std::isfinite(total) && std::abs(total - static_cast<double>(n)) <= kTraceTol, Reason::trace_mismatch,
          "sum(xi) = " + std::to_string(total) + " but " + std::to_string(n) + " vectors were given");
  require(xi.sup() <= 1.0, Reason::out_of_range, "entries must lie in [0, 1]");
  const Eigen::Index dim = e[0].dim();
  for (const auto& v : e) require(v.dim() == dim, Reason::dimension, "vector dimensions differ");

  FiniteHead h = finite_head(xi, n);
  FiniteRankResult out;
  out.m = h.m;
  out.r = h.r;
  out.decomp = RankOneDecomp(dim);

  const std::vector<double> head = xi.prefix(h.m);
  const std::vector<double> eta = head_eta(n, h.r);
  const UnitVec zero_vec = UnitVec::basis(dim, 0);
  if (!head.empty()) {
    auto v = majorizes(head, eta);
    require(v.holds, Reason::assertion, "finite-rank head is not majorized by (1, ..., 1, r)");
    RankOneDecomp d = horn_decompose(eta, e, head);
    std::size_t next = 0;
    for (std::size_t j = 0; j < head.size(); ++j) {
      out.decomp.add(head[j], head[j] > 0.0 ? d[next++].vector : zero_vec);
      out.origins.push_back({TermOrigin::Part::xi, j});
    }
  }
  const UnitVec& last = e[n - 1];
  std::size_t end = xi.has_finite_length() ? xi.length().value() : h.m + tail_terms;
  for (std::size_t j = h.m; j < end; ++j) {
    const double w = xi.at(j);
    out.decomp.add(w, w > 0.0 ? last : zero_vec);
    out.origins.push_back({TermOrigin::Part::xi, j});
  }
  if (!xi.has_finite_length()) out.pending = xi.tail_sum(end);

  Matrix target = Matrix::Zero(dim, dim);
  for (const auto& v : e) target += v.coords() * v.coords().adjoint();
  Matrix got = frame_operator(out.decomp).matrix() + out.pending * last.coords() * last.coords().adjoint();
  out.residual = (got - target).norm();
  return out;
}

CarpenterResult realize_split(const SplitSeq& s, CaseKind kind, const ProjectionStream& stream,
                              const CarpenterOptions& opts) {
  const std::size_t stages = std::max<std::size_t>(1, opts.stages);
  const PlannerOptions popts{kSumTol, opts.extend_limit};
  const bool ones_inf = s.ones.is_infinite();
  const bool zeros_inf = s.zeros.is_infinite();
  const std::size_t n_ones = ones_inf ? 0 : s.ones.value();
  const std::size_t n_zeros = zeros_inf ? 0 : s.zeros.value();

  // Stream assignment: the core and the ones split the stream.
  std::size_t t = 0;
  std::function<std::size_t(std::size_t)> core_e, ones_e;
  if (kind == CaseKind::finite_rank) {
    const double core_total = s.mu.total() + static_cast<double>(s.lambda.length().value()) - s.lambda.total();
    auto ti = as_integer(core_total, kTraceTol);
    require(ti.has_value() && *ti >= 0, Reason::kadison,
            "finite core trace " + std::to_string(core_total) + " is not an integer");
    t = static_cast<std::size_t>(*ti);
    if (ones_inf) {
      require(stream.is_infinite(), Reason::trace_mismatch, "infinitely many ones need an infinite stream");
    } else {
      require(stream.size() && *stream.size() == t + n_ones, Reason::trace_mismatch,
              "sum(xi) = " + std::to_string(t + n_ones) + " but the stream has " +
                  (stream.size() ? std::to_string(*stream.size()) : std::string("infinitely many")) + " vectors");
    }
    core_e = [](std::size_t p) { return p; };
    ones_e = [t](std::size_t j) { return t + j; };
  } else {
    require(stream.is_infinite(), Reason::trace_mismatch, "an infinite trace needs an infinite stream");
    if (ones_inf) {
      core_e = [](std::size_t p) { return 2 * p; };
      ones_e = [](std::size_t j) { return 2 * j + 1; };
    } else {
      core_e = [n_ones](std::size_t p) { return n_ones + p; };
      ones_e = [](std::size_t j) { return j; };
    }
  }

  Realizer R(stream, core_e);
  CarpenterResult res;
  res.tag = tag_for(s, kind);

  auto side_terms = [&](std::size_t stage) {
    if (stage == 1) {
      for (std::size_t j = 0; j < n_ones; ++j) {
        R.touch(ones_e(j));
        R.emit(1.0, R.evec(ones_e(j)), {TermOrigin::Part::one, j});
      }
      for (std::size_t j = 0; j < n_zeros; ++j) R.emit_zero({TermOrigin::Part::zero, j});
    }
    if (ones_inf) {
      R.touch(ones_e(stage - 1));
      R.emit(1.0, R.evec(ones_e(stage - 1)), {TermOrigin::Part::one, stage - 1});
    }
    if (zeros_inf) R.emit_zero({TermOrigin::Part::zero, stage - 1});
  };

  auto record = [&](std::size_t stage, const BlockPlan& plan, std::optional<KeycaseStep> ks = std::nullopt) {
    StageCertificate c = R.certify(stage, kind, plan);
    c.keycase = std::move(ks);
    require(c.residual <= opts.tol, Reason::assertion,
            "stage " + std::to_string(stage) + " identity residual " + std::to_string(c.residual) + " exceeds " +
                std::to_string(opts.tol));
    res.max_residual = std::max(res.max_residual, c.residual);
    res.certificates.push_back(std::move(c));
  };

  switch (kind) {
    case CaseKind::finite_rank: {
      CoreSeq core = finite_core(s);
      const bool core_inf = !core.seq.has_finite_length();
      const std::size_t total_stages = (core_inf || ones_inf || zeros_inf) ? stages : 1;
      FiniteHead h;
      if (t > 0) h = finite_head(core.seq, t);
      std::size_t next_tail = h.m;
      for (std::size_t stage = 1; stage <= total_stages; ++stage) {
        BlockPlan plan;
        plan.stage = stage;
        plan.frontier_open = false;
        plan.r_out = h.r;
        if (t > 0) {
          plan.frontier = t - 1;
          if (stage == 1) {
            plan.weights = core.seq.prefix(h.m);
            for (std::size_t j = 0; j < h.m; ++j) plan.sources.push_back(core.origin(j));
            plan.eta = head_eta(t, h.r);
            for (std::size_t p = 0; p < t; ++p) plan.targets.push_back(p);
            require(majorizes(plan.weights, plan.eta).holds, Reason::assertion,
                    "finite-rank head is not majorized by (1, ..., 1, r)");
          }
          const std::size_t end = core_inf ? next_tail + kTailChunk : core.seq.length().value();
          for (std::size_t j = next_tail; j < end && has(core.seq, j); ++j) {
            plan.direct.push_back({core.origin(j), core.seq.at(j), t - 1});
          }
          next_tail = std::max(next_tail, end);
          if (core_inf) {
            plan.pending = core.seq.tail_sum(next_tail);
            plan.pending_target = t - 1;
          }
          R.realize(plan);
        }
        side_terms(stage);
        record(stage, plan);
      }
      break;
    }
    case CaseKind::mu_diverges:
    case CaseKind::both_summable: {
      auto plans = kind == CaseKind::mu_diverges ? plan_mu_diverges(s, stages, popts)
                                                 : plan_both_summable(s, stages, popts);
      for (const auto& plan : plans) {
        R.realize(plan);
        side_terms(plan.stage);
        record(plan.stage, plan);
      }
      break;
    }
    case CaseKind::lambda_diverges: {
      auto lp = plan_lambda_diverges(s, stages, popts);
      for (const auto& plan : lp.plans) {
        R.realize(plan);
        side_terms(plan.stage);
        record(plan.stage, plan);
      }
      break;
    }
    case CaseKind::m_finite_n_inf: {
      MFinitePlan mp = plan_m_finite(s, popts);
      R.realize(mp.head);
      side_terms(1);
      record(1, mp.head);
      detail::KeycaseMachine km(s.lambda.drop(mp.n), R.evec(core_e(mp.key_start)));
      for (std::size_t stage = 2; stage <= stages; ++stage) {
        const std::size_t idx = core_e(mp.key_start + stage - 1);
        R.touch(idx);
        auto e = km.step(R.evec(idx));
        const std::size_t lambda_index = mp.n + stage - 2;
        R.emit(e.weight, e.v, {TermOrigin::Part::lambda, lambda_index});
        R.set_frontier(std::nullopt);
        R.set_outstanding({{km.carry_weight(), km.carry()}});
        BlockPlan step_plan;
        step_plan.stage = stage;
        step_plan.sources.push_back({TermOrigin::Part::lambda, lambda_index});
        step_plan.weights.push_back(e.weight);
        step_plan.r_in = mp.r;
        step_plan.frontier_open = false;
        side_terms(stage);
        record(stage, step_plan, e.step);
      }
      break;
    }
  }

  const Eigen::Index dim = std::max<Eigen::Index>(1, R.dim());
  res.decomp = RankOneDecomp(dim);
  for (const auto& term : R.terms()) {
    res.decomp.add(term.weight, UnitVec::normalized(pad(term.v, dim)));
    res.origins.push_back(term.origin);
  }
  res.ambient_dim = dim;
  const Matrix& tgt = R.last_target();
  res.target = HermOp(pad(Matrix(0.5 * (tgt + tgt.adjoint())), dim));
  return res;
}

CarpenterResult carpenter_decompose(const WeightSeq& xi, const ProjectionStream& e, const CarpenterOptions& opts) {
  require(xi.sup() <= 1.0, Reason::out_of_range, "carpenter decomposition needs entries in [0, 1]");
  const CaseTag tag = classify_case(xi);
  const double total = xi.total();
  if (std::isfinite(total)) {
    auto n = as_integer(total, kTraceTol);
    require(n.has_value(), Reason::kadison, "finite trace is not an integer");
    require(e.size() && static_cast<long long>(*e.size()) == *n, Reason::trace_mismatch,
            "sum(xi) = " + std::to_string(*n) + " but the stream has " +
                (e.size() ? std::to_string(*e.size()) : std::string("infinitely many")) + " vectors");
  } else {
    require(e.is_infinite(), Reason::trace_mismatch, "sum(xi) is infinite but the stream is finite");
  }
  CarpenterResult res = realize_split(strip01(xi), tag.kind, e, opts);
  res.tag = tag;
  return res;
}

}  // namespace adm
