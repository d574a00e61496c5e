#include <algorithm>
#include <cmath>
#include <string>

#include "adm/carpenter.hpp"
#include "adm/error.hpp"
#include "summation.hpp"

namespace adm {

std::string case_name(CaseKind c) {
  switch (c) {
    case CaseKind::finite_rank: return "FINITE_RANK";
    case CaseKind::mu_diverges: return "MU_DIVERGES";
    case CaseKind::lambda_diverges: return "LAMBDA_DIVERGES";
    case CaseKind::both_summable: return "BOTH_SUMMABLE_MN_INF";
    case CaseKind::m_finite_n_inf: return "M_FINITE_N_INF";
  }
  return "?";
}

std::string origin_label(const TermOrigin& o) {
  const char* p = "xi";
  switch (o.part) {
    case TermOrigin::Part::xi: p = "xi"; break;
    case TermOrigin::Part::mu: p = "mu"; break;
    case TermOrigin::Part::lambda: p = "lambda"; break;
    case TermOrigin::Part::zero: p = "zero"; break;
    case TermOrigin::Part::one: p = "one"; break;
  }
  return std::string(p) + ":" + std::to_string(o.index);
}

namespace {

bool core_is_finite(const SplitSeq& s) { return std::isfinite(s.mu.total()) && s.lambda.has_finite_length(); }

long long integral_gap(const SplitSeq& s) {
  const double gap = s.lambda.total() - s.mu.total();
  auto k = as_integer(gap);
  if (!k) fail(Reason::kadison, "sum(lambda) - sum(mu) = " + std::to_string(gap) + " is not an integer");
  return *k;
}

}  // namespace

CaseTag classify_case(const SplitSeq& s) {
  CaseTag tag;
  tag.M = s.M();
  tag.N = s.N();
  const double sum_mu = s.mu.total();
  const double sum_lambda = s.lambda.total();
  if (core_is_finite(s)) {
    const double t = sum_mu + static_cast<double>(s.lambda.length().value()) - sum_lambda;
    if (!as_integer(t)) fail(Reason::kadison, "finite trace " + std::to_string(t) + " is not an integer");
    tag.kind = CaseKind::finite_rank;
    return tag;
  }
  if (std::isinf(sum_mu)) {
    tag.kind = CaseKind::mu_diverges;
    return tag;
  }
  if (std::isinf(sum_lambda)) {
    tag.kind = CaseKind::lambda_diverges;
    return tag;
  }
  tag.k = integral_gap(s);
  if (tag.M.is_infinite() && tag.N.is_infinite()) {
    tag.kind = CaseKind::both_summable;
  } else if (tag.M.is_finite() && tag.N.is_infinite()) {
    tag.kind = CaseKind::m_finite_n_inf;
  } else {
    fail(Reason::unclassifiable, "summable mu and lambda with N finite should have finite trace");
  }
  return tag;
}

CaseTag classify_case(const WeightSeq& xi) {
  const auto rep = kadison_check(xi);
  if (!rep.satisfied) {
    fail(Reason::kadison, "a - b = " + std::to_string(rep.a - rep.b) + " is not an integer");
  }
  return classify_case(strip01(xi));
}

namespace {

// Fills eta = (1 - r_in, 1, ..., 1, r_out) on consecutive core positions
// starting at p, with c and r_out read off the block sum.
void close_block(BlockPlan& plan, std::size_t p) {
  const double total = detail::sum(plan.weights);
  const double base = 1.0 - plan.r_in;
  double rest = total - base;
  double c = std::floor(rest);
  double r = rest - c;
  if (rest < 0.0) {
    c = 0.0;
    r = 0.0;
  } else if (r > 1.0 - 1e-12) {
    c += 1.0;
    r = 0.0;
  } else if (r < 1e-13) {
    r = 0.0;
  }
  const auto ones = static_cast<std::size_t>(c);
  plan.eta.assign(1, base);
  plan.eta.insert(plan.eta.end(), ones, 1.0);
  plan.eta.push_back(r);
  plan.targets.clear();
  for (std::size_t i = 0; i < ones + 2; ++i) plan.targets.push_back(p + i);
  plan.r_out = r;
  plan.frontier = p + ones + 1;

  plan.elem_check.reset();
  if (plan.r_in > 0.0 && r > 0.0 && r <= base) {
    plan.elem_check = elem_check_ii(WeightSeq::finite(plan.weights), base, r);
  }
}

bool block_holds(const BlockPlan& plan, const PlannerOptions& opts) {
  return majorizes(plan.weights, plan.eta, opts.tol).holds;
}

template <class Pull, class Close>
void settle(BlockPlan& plan, const PlannerOptions& opts, Pull pull, Close close) {
  close(plan);
  while (!block_holds(plan, opts)) {
    if (plan.extensions >= opts.extend_limit) {
      auto v = majorizes(plan.weights, plan.eta, opts.tol);
      fail(Reason::majorization,
           "stage " + std::to_string(plan.stage) + ": block not majorized after " + std::to_string(plan.extensions) +
               " extensions (first failing partial sum k = " + std::to_string(v.failing_index.value_or(0)) + ")");
    }
    pull(plan);
    ++plan.extensions;
    close(plan);
  }
}

void add_mu(BlockPlan& plan, const SplitSeq& s, std::size_t j) {
  const double x = s.mu.at(j);
  require(x > 0.0 && x <= 1.0, Reason::out_of_range, "mu entries must lie in (0, 1]");
  plan.sources.push_back({TermOrigin::Part::mu, j});
  plan.weights.push_back(x);
}

double add_lambda(BlockPlan& plan, const SplitSeq& s, std::size_t j) {
  const double x = s.lambda.at(j);
  require(x > 0.0 && x < 0.5, Reason::out_of_range, "lambda entries must lie in (0, 1/2)");
  plan.sources.push_back({TermOrigin::Part::lambda, j});
  plan.weights.push_back(1.0 - x);
  return x;
}

bool has(const WeightSeq& w, std::size_t j) { return w.length().is_infinite() || j < w.length().value(); }

}  // namespace

std::vector<BlockPlan> plan_mu_diverges(const SplitSeq& s, std::size_t stages, const PlannerOptions& opts) {
  require(std::isinf(s.mu.total()), Reason::precondition, "mu-diverges planner needs sum(mu) = infinity");
  std::vector<BlockPlan> plans;
  std::size_t mi = 0, li = 0, p = 0;
  double r_in = 0.0;
  for (std::size_t stage = 1; stage <= stages; ++stage) {
    BlockPlan plan;
    plan.stage = stage;
    plan.r_in = r_in;
    detail::Summation sum;
    double target = 1.0 - r_in;
    if (has(s.lambda, li)) {
      add_lambda(plan, s, li++);
      sum.add(plan.weights.back());
      target = 2.0 - r_in;
    }
    const double eps = opts.tol * std::max(1.0, target);
    while (sum.value() < target - eps) {
      add_mu(plan, s, mi++);
      sum.add(plan.weights.back());
    }
    settle(
        plan, opts, [&](BlockPlan& b) { add_mu(b, s, mi++); }, [&](BlockPlan& b) { close_block(b, p); });
    p = plan.frontier;
    r_in = plan.r_out;
    plans.push_back(std::move(plan));
  }
  return plans;
}

LambdaPlan plan_lambda_diverges(const SplitSeq& s, std::size_t stages, const PlannerOptions& opts) {
  require(std::isinf(s.lambda.total()), Reason::precondition, "lambda-diverges planner needs sum(lambda) = infinity");
  require(std::isfinite(s.mu.total()), Reason::precondition, "lambda-diverges planner needs sum(mu) < infinity");
  LambdaPlan out;

  // Head of mu first fit into bins of capacity 1; the tail from T on, whose
  // sum is at most 1, shares one more bin.
  const bool mu_infinite = s.mu.length().is_infinite();
  std::size_t tail_start = mu_infinite ? 0 : s.mu.length().value();
  if (mu_infinite) {
    while (s.mu.tail_sum(tail_start) > 1.0) {
      ++tail_start;
      require(tail_start < 100000000, Reason::assertion, "mu tail never drops below 1");
    }
  }
  out.tail_start = tail_start;
  std::vector<double> load;
  const double cap = 1.0 + opts.tol;
  for (std::size_t j = 0; j < tail_start; ++j) {
    const double x = s.mu.at(j);
    require(x > 0.0 && x <= 1.0 + opts.tol, Reason::out_of_range, "mu entries must lie in (0, 1]");
    std::size_t b = 0;
    while (b < load.size() && load[b] + x > cap) ++b;
    if (b == load.size()) {
      load.push_back(0.0);
      out.bins.emplace_back();
    }
    load[b] += x;
    out.bins[b].push_back(j);
  }
  const bool tail_bin = mu_infinite;
  if (tail_bin) {
    load.push_back(s.mu.tail_sum(tail_start));
    out.bins.emplace_back();
  }
  for (double l : load) out.s.push_back(std::max(0.0, 1.0 - l));
  const std::size_t K = out.s.size();
  constexpr std::size_t kTailChunk = 4;

  auto add_tail = [&](BlockPlan& plan) {
    if (!tail_bin) return;
    const std::size_t lo = tail_start + kTailChunk * (plan.stage - 1);
    const std::size_t hi = lo + kTailChunk;
    for (std::size_t j = lo; j < hi; ++j) {
      plan.direct.push_back({{TermOrigin::Part::mu, j}, s.mu.at(j), K - 1});
    }
    plan.pending = s.mu.tail_sum(hi);
    plan.pending_target = K - 1;
  };

  std::size_t li = 0;
  std::size_t p = K;
  double r_in = 0.0;
  for (std::size_t stage = 1; stage <= stages; ++stage) {
    BlockPlan plan;
    plan.stage = stage;
    plan.r_in = r_in;
    detail::Summation lam;
    if (stage == 1) {
      const double need = 2.0 * static_cast<double>(K) + 1.0;
      while (lam.value() < need - opts.tol * need) lam.add(add_lambda(plan, s, li++));
      const double s_total = detail::sum(out.s);
      auto close_first = [&](BlockPlan& b) {
        const double rest = detail::sum(b.weights) - s_total;
        double n1 = std::floor(rest);
        double r = rest - n1;
        if (r > 1.0 - 1e-12) {
          n1 += 1.0;
          r = 0.0;
        } else if (r < 1e-13) {
          r = 0.0;
        }
        const auto N1 = static_cast<std::size_t>(n1);
        b.eta.assign(N1, 1.0);
        b.targets.clear();
        for (std::size_t i = 0; i < N1; ++i) b.targets.push_back(K + i);
        for (std::size_t k = 0; k < K; ++k) {
          b.eta.push_back(out.s[k]);
          b.targets.push_back(k);
        }
        b.eta.push_back(r);
        b.targets.push_back(K + N1);
        b.r_out = r;
        b.frontier = K + N1;
      };
      settle(
          plan, opts, [&](BlockPlan& b) { add_lambda(b, s, li++); }, close_first);
      for (std::size_t k = 0; k < out.bins.size(); ++k) {
        for (std::size_t j : out.bins[k]) plan.direct.push_back({{TermOrigin::Part::mu, j}, s.mu.at(j), k});
      }
    } else {
      const double need = r_in > 0.0 ? 3.0 : 1.0;
      while (lam.value() < need - opts.tol * need) lam.add(add_lambda(plan, s, li++));
      settle(
          plan, opts, [&](BlockPlan& b) { add_lambda(b, s, li++); }, [&](BlockPlan& b) { close_block(b, p); });
    }
    add_tail(plan);
    p = plan.frontier;
    r_in = plan.r_out;
    out.plans.push_back(std::move(plan));
  }
  return out;
}

std::vector<BlockPlan> plan_both_summable(const SplitSeq& s, std::size_t stages, const PlannerOptions& opts) {
  require(s.M().is_infinite() && s.N().is_infinite(), Reason::precondition, "both-summable planner needs M = N = infinity");
  require(std::isfinite(s.mu.total()) && std::isfinite(s.lambda.total()), Reason::precondition,
          "both-summable planner needs summable mu and lambda");
  const long long k = integral_gap(s);
  auto tl = [&](std::size_t n) { return s.lambda.tail_sum(n); };
  auto tm = [&](std::size_t m) { return s.mu.tail_sum(m); };
  constexpr double slack = 1e-15;

  std::vector<BlockPlan> plans;
  std::size_t n_prev = 0, m_prev = 0, p = 0;
  double r_in = 0.0;
  for (std::size_t stage = 1; stage <= stages; ++stage) {
    BlockPlan plan;
    plan.stage = stage;
    plan.r_in = r_in;
    std::size_t n = 0, m = 0;
    if (stage == 1) {
      n = static_cast<std::size_t>(std::max<long long>(1, k + 1));
      while (tl(n) >= 0.5) ++n;
      m = 1;
      while (tm(m) > tl(n) + slack) ++m;
    } else {
      n = n_prev + 2;
      while (tl(n) > tm(m_prev) + slack) ++n;
      m = m_prev + 1;
      while (tm(m) > tl(n) + slack) ++m;
    }
    for (std::size_t j = m_prev; j < m; ++j) add_mu(plan, s, j);
    for (std::size_t j = n_prev; j < n; ++j) add_lambda(plan, s, j);
    std::size_t mi = m;
    settle(
        plan, opts, [&](BlockPlan& b) { add_mu(b, s, mi++); }, [&](BlockPlan& b) { close_block(b, p); });
    // Extensions consume extra mu; the next stage starts after them.
    m = mi;
    n_prev = n;
    m_prev = m;
    p = plan.frontier;
    r_in = plan.r_out;
    plans.push_back(std::move(plan));
  }
  return plans;
}

MFinitePlan plan_m_finite(const SplitSeq& s, const PlannerOptions& opts) {
  require(s.M().is_finite() && s.N().is_infinite(), Reason::precondition, "m-finite planner needs M finite, N infinite");
  require(std::isfinite(s.lambda.total()), Reason::precondition, "m-finite planner needs summable lambda");
  MFinitePlan out;
  out.k = integral_gap(s);
  std::size_t n = static_cast<std::size_t>(std::max<long long>(1, out.k + 2));
  while (s.lambda.tail_sum(n) >= 1.0) ++n;

  BlockPlan& plan = out.head;
  plan.stage = 1;
  const std::size_t M = s.M().value();
  for (std::size_t j = 0; j < M; ++j) add_mu(plan, s, j);
  for (std::size_t j = 0; j < n; ++j) add_lambda(plan, s, j);
  std::size_t ni = n;
  settle(
      plan, opts, [&](BlockPlan& b) { add_lambda(b, s, ni++); }, [&](BlockPlan& b) { close_block(b, 0); });
  out.n = ni;
  out.r = s.lambda.tail_sum(ni);
  require(std::abs(out.r - plan.r_out) <= 1e-9, Reason::assertion,
          "head remainder " + std::to_string(plan.r_out) + " differs from the lambda tail " + std::to_string(out.r));
  // The key case starts on the frontier with coefficient 1 - r.
  plan.r_out = out.r;
  plan.eta.back() = out.r;
  out.key_start = plan.frontier;
  return out;
}

}  // namespace adm
