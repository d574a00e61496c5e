#include "adm/seqkit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "adm/error.hpp"
#include "summation.hpp"

namespace adm {

namespace {

void check_nonnegative(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    require(std::isfinite(x) && x >= 0.0, Reason::out_of_range,
            std::string(what) + " entries must be finite and nonnegative");
  }
}

void check_ratio(double first, double ratio) {
  require(std::isfinite(first) && first >= 0.0, Reason::out_of_range, "tail_first must be >= 0");
  require(std::isfinite(ratio) && ratio >= 0.0 && ratio < 1.0, Reason::out_of_range,
          "tail_ratio must lie in [0, 1)");
}

double geometric_sum_from(double first, double ratio, std::size_t k) {
  if (first == 0.0) return 0.0;
  return first * std::pow(ratio, static_cast<double>(k)) / (1.0 - ratio);
}

// Round-robin walk over the parts of an interleaved sequence.
class RoundRobin {
 public:
  explicit RoundRobin(const std::vector<WeightSeq>& parts) : parts_(parts), pos_(parts.size(), 0) {
    for (std::size_t p = 0; p < parts.size(); ++p) {
      len_.push_back(parts[p].length());
      if (!parts[p].empty()) active_.push_back(p);
    }
  }

  bool exhausted() const { return active_.empty(); }

  std::pair<std::size_t, std::size_t> next() {
    std::size_t p = active_[ptr_];
    std::size_t idx = pos_[p]++;
    if (len_[p].is_finite() && pos_[p] >= len_[p].value()) {
      active_.erase(active_.begin() + static_cast<std::ptrdiff_t>(ptr_));
      if (ptr_ >= active_.size()) ptr_ = 0;
    } else {
      ptr_ = (ptr_ + 1) % active_.size();
    }
    return {p, idx};
  }

  std::size_t position(std::size_t part) const { return pos_[part]; }

  // Parts still producing entries, in the order they will next be visited.
  std::vector<std::size_t> rotation() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < active_.size(); ++i) out.push_back(active_[(ptr_ + i) % active_.size()]);
    return out;
  }

 private:
  const std::vector<WeightSeq>& parts_;
  std::vector<Cardinal> len_;
  std::vector<std::size_t> pos_;
  std::vector<std::size_t> active_;
  std::size_t ptr_ = 0;
};

struct Splitter {
  std::vector<double> mu;
  std::vector<double> lambda;
  Cardinal zeros;
  Cardinal ones;

  void add(double x) {
    if (x == 0.0) {
      zeros = zeros + Cardinal(1);
    } else if (x == 1.0) {
      ones = ones + Cardinal(1);
    } else if (x <= 0.5) {
      mu.push_back(x);
    } else {
      lambda.push_back(1.0 - x);
    }
  }
};

}  // namespace

WeightSeq WeightSeq::finite(std::vector<double> values) {
  check_nonnegative(values, "sequence");
  WeightSeq s;
  s.kind_ = Kind::finite;
  s.head_ = std::move(values);
  return s;
}

WeightSeq WeightSeq::finitely_supported(std::vector<double> values) {
  WeightSeq s = finite(std::move(values));
  s.kind_ = Kind::finitely_supported;
  return s;
}

WeightSeq WeightSeq::geometric_tail(std::vector<double> head, double first, double ratio) {
  check_nonnegative(head, "sequence");
  check_ratio(first, ratio);
  WeightSeq s;
  s.kind_ = Kind::geometric_tail;
  s.head_ = std::move(head);
  s.first_ = first;
  s.ratio_ = ratio;
  return s;
}

WeightSeq WeightSeq::one_minus_geometric(std::vector<double> head, double first, double ratio) {
  check_nonnegative(head, "sequence");
  check_ratio(first, ratio);
  require(first <= 1.0, Reason::out_of_range, "one-minus-geometric needs tail_first <= 1");
  WeightSeq s;
  s.kind_ = Kind::one_minus_geometric;
  s.head_ = std::move(head);
  s.first_ = first;
  s.ratio_ = ratio;
  return s;
}

WeightSeq WeightSeq::periodic(std::vector<double> head, std::vector<double> cycle) {
  check_nonnegative(head, "sequence");
  check_nonnegative(cycle, "cycle");
  if (cycle.empty()) return finite(std::move(head));
  WeightSeq s;
  s.kind_ = Kind::periodic;
  s.head_ = std::move(head);
  s.cycle_ = std::move(cycle);
  return s;
}

WeightSeq WeightSeq::interleave(std::vector<WeightSeq> parts) {
  std::erase_if(parts, [](const WeightSeq& p) { return p.empty(); });
  if (parts.empty()) return WeightSeq{};
  if (parts.size() == 1) return std::move(parts.front());
  WeightSeq s;
  s.kind_ = Kind::interleave;
  s.parts_ = std::move(parts);
  return s;
}

bool WeightSeq::has_finite_length() const {
  switch (kind_) {
    case Kind::finite: return true;
    case Kind::interleave:
      return std::all_of(parts_.begin(), parts_.end(), [](const WeightSeq& p) { return p.has_finite_length(); });
    default: return false;
  }
}

Cardinal WeightSeq::length() const {
  switch (kind_) {
    case Kind::finite: return Cardinal(head_.size());
    case Kind::interleave: {
      Cardinal total(0);
      for (const auto& p : parts_) total = total + p.length();
      return total;
    }
    default: return Cardinal::infinite();
  }
}

bool WeightSeq::empty() const {
  if (kind_ == Kind::finite) return head_.empty();
  if (kind_ == Kind::interleave) return parts_.empty();
  return false;
}

double WeightSeq::tail_value(std::size_t k) const {
  switch (kind_) {
    case Kind::finitely_supported: return 0.0;
    case Kind::geometric_tail: return first_ * std::pow(ratio_, static_cast<double>(k));
    case Kind::one_minus_geometric: return 1.0 - first_ * std::pow(ratio_, static_cast<double>(k));
    case Kind::periodic: return cycle_[k % cycle_.size()];
    default: break;
  }
  fail(Reason::assertion, "tail_value on a sequence without a closed-form tail");
}

double WeightSeq::at(std::size_t i) const {
  if (kind_ == Kind::interleave) {
    RoundRobin rr(parts_);
    for (std::size_t step = 0;; ++step) {
      require(!rr.exhausted(), Reason::out_of_range, "sequence index past the end");
      auto [p, idx] = rr.next();
      if (step == i) return parts_[p].at(idx);
    }
  }
  if (i < head_.size()) return head_[i];
  require(kind_ != Kind::finite, Reason::out_of_range, "sequence index past the end");
  return tail_value(i - head_.size());
}

std::vector<double> WeightSeq::prefix(std::size_t n) const {
  std::vector<double> out;
  if (kind_ == Kind::interleave) {
    RoundRobin rr(parts_);
    std::vector<std::pair<std::size_t, std::size_t>> steps;
    while (steps.size() < n && !rr.exhausted()) steps.push_back(rr.next());
    std::vector<std::vector<double>> cache(parts_.size());
    for (std::size_t p = 0; p < parts_.size(); ++p) cache[p] = parts_[p].prefix(rr.position(p));
    out.reserve(steps.size());
    for (auto [p, idx] : steps) out.push_back(cache[p][idx]);
    return out;
  }
  Cardinal len = length();
  std::size_t count = len.is_finite() ? std::min(n, len.value()) : n;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(i < head_.size() ? head_[i] : tail_value(i - head_.size()));
  return out;
}

std::vector<double> WeightSeq::values() const {
  require(has_finite_length(), Reason::precondition, "values() needs a finite sequence");
  return prefix(length().value());
}

double WeightSeq::tail_sum(std::size_t from) const {
  if (kind_ == Kind::interleave) {
    RoundRobin rr(parts_);
    for (std::size_t step = 0; step < from && !rr.exhausted(); ++step) rr.next();
    detail::Summation sum;
    for (std::size_t p = 0; p < parts_.size(); ++p) sum.add(parts_[p].tail_sum(rr.position(p)));
    return sum.value();
  }
  detail::Summation sum;
  for (std::size_t i = from; i < head_.size(); ++i) sum.add(head_[i]);
  std::size_t k = from > head_.size() ? from - head_.size() : 0;
  switch (kind_) {
    case Kind::geometric_tail: sum.add(geometric_sum_from(first_, ratio_, k)); break;
    case Kind::one_minus_geometric: return kInfinity;
    case Kind::periodic:
      if (std::any_of(cycle_.begin(), cycle_.end(), [](double c) { return c > 0.0; })) return kInfinity;
      break;
    default: break;
  }
  return sum.value();
}

WeightSeq WeightSeq::drop(std::size_t n) const {
  if (n == 0) return *this;
  if (kind_ == Kind::interleave) {
    RoundRobin rr(parts_);
    for (std::size_t step = 0; step < n && !rr.exhausted(); ++step) rr.next();
    std::vector<WeightSeq> rest;
    for (std::size_t p : rr.rotation()) rest.push_back(parts_[p].drop(rr.position(p)));
    return interleave(std::move(rest));
  }
  WeightSeq s = *this;
  if (n <= head_.size()) {
    s.head_.erase(s.head_.begin(), s.head_.begin() + static_cast<std::ptrdiff_t>(n));
    return s;
  }
  std::size_t k = n - head_.size();
  s.head_.clear();
  switch (kind_) {
    case Kind::geometric_tail:
    case Kind::one_minus_geometric: s.first_ = first_ * std::pow(ratio_, static_cast<double>(k)); break;
    case Kind::periodic:
      std::rotate(s.cycle_.begin(), s.cycle_.begin() + static_cast<std::ptrdiff_t>(k % cycle_.size()),
                  s.cycle_.end());
      break;
    default: break;
  }
  return s;
}

double WeightSeq::sup() const {
  double m = 0.0;
  for (double x : head_) m = std::max(m, x);
  switch (kind_) {
    case Kind::geometric_tail: m = std::max(m, first_); break;
    case Kind::one_minus_geometric: m = 1.0; break;
    case Kind::periodic:
      for (double c : cycle_) m = std::max(m, c);
      break;
    case Kind::interleave:
      for (const auto& p : parts_) m = std::max(m, p.sup());
      break;
    default: break;
  }
  return m;
}

ThresholdSums WeightSeq::threshold_sums(double alpha) const {
  require(alpha > 0.0 && alpha < 1.0, Reason::precondition, "alpha must lie in (0, 1)");
  detail::Summation a;
  detail::Summation b;
  auto classify = [&](double x) {
    if (x <= alpha) {
      a.add(x);
    } else {
      b.add(1.0 - x);
    }
  };
  if (kind_ == Kind::interleave) {
    for (const auto& p : parts_) {
      ThresholdSums t = p.threshold_sums(alpha);
      a.add(t.a);
      b.add(t.b);
    }
    return {a.value(), b.value()};
  }
  for (double x : head_) classify(x);
  switch (kind_) {
    case Kind::geometric_tail: {
      std::size_t k = 0;
      while (first_ * std::pow(ratio_, static_cast<double>(k)) > alpha) classify(tail_value(k++));
      a.add(geometric_sum_from(first_, ratio_, k));
      break;
    }
    case Kind::one_minus_geometric: {
      std::size_t k = 0;
      while (tail_value(k) <= alpha) classify(tail_value(k++));
      b.add(geometric_sum_from(first_, ratio_, k));
      break;
    }
    case Kind::periodic:
      for (double c : cycle_) {
        if (c <= alpha) {
          if (c > 0.0) a.add(kInfinity);
        } else if (c < 1.0) {
          b.add(kInfinity);
        }
      }
      break;
    default: break;
  }
  return {a.value(), b.value()};
}

std::vector<double> rearrange_desc(std::span<const double> xi) {
  std::vector<double> out(xi.begin(), xi.end());
  std::stable_sort(out.begin(), out.end(), std::greater<>());
  return out;
}

WeightSeq rearrange_desc(const WeightSeq& xi) {
  require(xi.has_finite_length(), Reason::precondition, "rearrange_desc needs a finite sequence");
  auto v = xi.values();
  return WeightSeq::finite(rearrange_desc(v));
}

MajorizationVerdict majorizes(std::span<const double> xi, std::span<const double> eta, double tol) {
  auto xs = rearrange_desc(xi);
  auto es = rearrange_desc(eta);
  std::size_t n = std::max(xs.size(), es.size());
  xs.resize(n, 0.0);
  es.resize(n, 0.0);

  double scale = 1.0;
  {
    detail::Summation sx, se;
    for (double x : xs) sx.add(std::abs(x));
    for (double e : es) se.add(std::abs(e));
    scale = std::max({1.0, sx.value(), se.value()});
  }
  const double eps = tol * scale;

  MajorizationVerdict v;
  detail::Summation px, pe;
  for (std::size_t k = 0; k < n; ++k) {
    px.add(xs[k]);
    pe.add(es[k]);
    if (!v.failing_index && px.value() > pe.value() + eps) v.failing_index = k + 1;
  }
  v.sum_gap = px.value() - pe.value();
  v.holds = !v.failing_index && std::abs(v.sum_gap) <= eps;
  return v;
}

MajorizationVerdict majorizes(const WeightSeq& xi, const WeightSeq& eta, double tol) {
  require(xi.has_finite_length() && eta.has_finite_length(), Reason::precondition,
          "majorization is only defined here for finite sequences");
  auto x = xi.values();
  auto e = eta.values();
  return majorizes(std::span<const double>(x), std::span<const double>(e), tol);
}

std::optional<long long> as_integer(double x, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  double r = std::nearbyint(x);
  if (std::abs(x - r) <= tol) return static_cast<long long>(r);
  return std::nullopt;
}

KadisonReport kadison_check(const WeightSeq& xi, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, Reason::precondition, "alpha must lie in (0, 1)");
  require(xi.sup() <= 1.0, Reason::out_of_range, "Kadison condition needs entries in [0, 1]");
  ThresholdSums t = xi.threshold_sums(alpha);
  KadisonReport r;
  r.a = t.a;
  r.b = t.b;
  r.alpha = alpha;
  if (std::isinf(t.a) || std::isinf(t.b)) {
    r.satisfied = true;
  } else {
    r.integer_gap = as_integer(t.a - t.b);
    r.satisfied = r.integer_gap.has_value();
  }
  return r;
}

SplitSeq split_mu_lambda(const WeightSeq& xi) {
  require(xi.sup() <= 1.0, Reason::out_of_range, "split needs entries in [0, 1]");
  using Kind = WeightSeq::Kind;

  if (xi.kind() == Kind::interleave) {
    std::vector<WeightSeq> mus, lambdas;
    SplitSeq out;
    for (const auto& p : xi.parts()) {
      SplitSeq s = split_mu_lambda(p);
      mus.push_back(std::move(s.mu));
      lambdas.push_back(std::move(s.lambda));
      out.zeros = out.zeros + s.zeros;
      out.ones = out.ones + s.ones;
    }
    out.mu = WeightSeq::interleave(std::move(mus));
    out.lambda = WeightSeq::interleave(std::move(lambdas));
    return out;
  }

  Splitter sp;
  for (double x : xi.head()) sp.add(x);
  const double f = xi.tail_first();
  const double q = xi.tail_ratio();
  WeightSeq mu, lambda;
  bool mu_set = false, lambda_set = false;

  switch (xi.kind()) {
    case Kind::finite: break;
    case Kind::finitely_supported: sp.zeros = Cardinal::infinite(); break;
    case Kind::geometric_tail:
      if (f == 0.0) {
        sp.zeros = Cardinal::infinite();
      } else if (q == 0.0) {
        sp.add(f);
        sp.zeros = Cardinal::infinite();
      } else {
        std::size_t k = 0;
        double v = f;
        while (v > 0.5) {
          sp.add(v);
          v = f * std::pow(q, static_cast<double>(++k));
        }
        mu = WeightSeq::geometric_tail(sp.mu, v, q);
        mu_set = true;
      }
      break;
    case Kind::one_minus_geometric:
      if (f == 0.0) {
        sp.ones = Cardinal::infinite();
      } else if (q == 0.0) {
        sp.add(1.0 - f);
        sp.ones = Cardinal::infinite();
      } else {
        std::size_t k = 0;
        double g = f;
        while (g >= 0.5) {
          sp.add(1.0 - g);
          g = f * std::pow(q, static_cast<double>(++k));
        }
        lambda = WeightSeq::geometric_tail(sp.lambda, g, q);
        lambda_set = true;
      }
      break;
    case Kind::periodic: {
      std::vector<double> cyc_mu, cyc_lambda;
      for (double c : xi.cycle()) {
        if (c == 0.0) {
          sp.zeros = Cardinal::infinite();
        } else if (c == 1.0) {
          sp.ones = Cardinal::infinite();
        } else if (c <= 0.5) {
          cyc_mu.push_back(c);
        } else {
          cyc_lambda.push_back(1.0 - c);
        }
      }
      mu = WeightSeq::periodic(sp.mu, cyc_mu);
      lambda = WeightSeq::periodic(sp.lambda, cyc_lambda);
      mu_set = lambda_set = true;
      break;
    }
    case Kind::interleave: break;
  }

  SplitSeq out;
  out.mu = mu_set ? std::move(mu) : WeightSeq::finite(sp.mu);
  out.lambda = lambda_set ? std::move(lambda) : WeightSeq::finite(sp.lambda);
  out.zeros = sp.zeros;
  out.ones = sp.ones;
  return out;
}

WeightSeq elem_eta_i(const WeightSeq& xi) {
  require(xi.has_finite_length(), Reason::precondition, "elem_eta_i needs a finite sequence");
  require(xi.sup() <= 1.0, Reason::out_of_range, "entries must lie in [0, 1]");
  const double s = xi.total();
  std::size_t n = 0;
  double r = 0.0;
  if (auto k = as_integer(s, kSumTol)) {
    n = static_cast<std::size_t>(*k);
  } else {
    n = static_cast<std::size_t>(std::floor(s));
    r = s - static_cast<double>(n);
  }
  std::vector<double> eta(n, 1.0);
  if (r > 0.0) eta.push_back(r);
  return WeightSeq::finite(std::move(eta));
}

bool elem_check_ii(const WeightSeq& xi, double r1, double r2) {
  require(xi.has_finite_length(), Reason::precondition, "elem_check_ii needs a finite sequence");
  require(xi.sup() <= 1.0, Reason::out_of_range, "entries must lie in [0, 1]");
  require(r2 > 0.0 && r2 <= r1 && r1 <= 1.0, Reason::precondition, "need 0 < r2 <= r1 <= 1");
  auto v = xi.values();
  const double s = detail::sum(v);
  auto n = as_integer(s - r1 - r2);
  require(n.has_value() && *n >= 0, Reason::precondition, "sum(xi) - r1 - r2 must be a nonnegative integer");
  auto sorted = rearrange_desc(v);
  const std::size_t count = static_cast<std::size_t>(*n) + 1;
  sorted.resize(std::max(sorted.size(), count), 0.0);
  const double lhs = detail::sum(std::span<const double>(sorted.data(), count));
  return lhs <= static_cast<double>(*n) + r1 + kSumTol * std::max(1.0, s);
}

}  // namespace adm
