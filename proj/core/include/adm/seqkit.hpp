#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace adm {

/// Absolute tolerance for equality of short finite sums.
inline constexpr double kSumTol = 1e-12;
/// Tolerance used before snapping a quantity that must be an integer.
inline constexpr double kIntegralityTol = 1e-9;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A count that may be infinite (the number of zeros, ones, or the length of
/// a sequence).
class Cardinal {
 public:
  constexpr Cardinal() = default;
  constexpr Cardinal(std::size_t n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  static constexpr Cardinal infinite() {
    Cardinal c;
    c.infinite_ = true;
    return c;
  }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr bool is_finite() const noexcept { return !infinite_; }
  /// Only meaningful when finite.
  constexpr std::size_t value() const noexcept { return value_; }

  friend constexpr Cardinal operator+(Cardinal x, Cardinal y) {
    if (x.infinite_ || y.infinite_) return infinite();
    return Cardinal(x.value_ + y.value_);
  }
  friend constexpr bool operator==(Cardinal x, Cardinal y) {
    return x.infinite_ == y.infinite_ && (x.infinite_ || x.value_ == y.value_);
  }

  std::string to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

 private:
  std::size_t value_ = 0;
  bool infinite_ = false;
};

/// Sums used by the Kadison condition at threshold alpha:
/// a = sum of entries <= alpha, b = sum of (1 - x) over entries > alpha.
struct ThresholdSums {
  double a = 0.0;
  double b = 0.0;
};

/// A nonnegative scalar sequence, finite or infinite, restricted to closed
/// forms so that every tail sum is computed exactly rather than estimated.
///
/// Every kind is an explicit head followed by a tail:
///  - finite: nothing after the head
///  - finitely_supported: infinitely many zeros
///  - geometric_tail: tail_first * tail_ratio^k, k = 0, 1, ...
///  - one_minus_geometric: 1 - tail_first * tail_ratio^k
///  - periodic: the cycle repeated forever
///  - interleave: round-robin merge of the parts, skipping exhausted parts
///    (the `xi (+) eta = <xi_1, eta_1, xi_2, eta_2, ...>` construction)
class WeightSeq {
 public:
  enum class Kind { finite, finitely_supported, geometric_tail, one_minus_geometric, periodic, interleave };

  WeightSeq() = default;

  static WeightSeq finite(std::vector<double> values);
  static WeightSeq finitely_supported(std::vector<double> values);
  static WeightSeq geometric_tail(std::vector<double> head, double first, double ratio);
  static WeightSeq one_minus_geometric(std::vector<double> head, double first, double ratio);
  static WeightSeq periodic(std::vector<double> head, std::vector<double> cycle);
  static WeightSeq interleave(std::vector<WeightSeq> parts);

  Kind kind() const noexcept { return kind_; }
  bool has_finite_length() const;
  Cardinal length() const;
  bool empty() const;

  const std::vector<double>& head() const noexcept { return head_; }
  double tail_first() const noexcept { return first_; }
  double tail_ratio() const noexcept { return ratio_; }
  const std::vector<double>& cycle() const noexcept { return cycle_; }
  const std::vector<WeightSeq>& parts() const noexcept { return parts_; }

  /// Entry i (0-based). Throws out_of_range past the end of a finite sequence.
  double at(std::size_t i) const;
  /// The first min(n, length) entries.
  std::vector<double> prefix(std::size_t n) const;
  /// Exact sum of entries with index >= from; +infinity when divergent.
  double tail_sum(std::size_t from) const;
  double total() const { return tail_sum(0); }
  /// The sequence with its first n entries removed.
  WeightSeq drop(std::size_t n) const;
  /// Supremum of the entries (0 for the empty sequence).
  double sup() const;
  ThresholdSums threshold_sums(double alpha) const;

  /// All entries of a finite-length sequence.
  std::vector<double> values() const;

 private:
  double tail_value(std::size_t k) const;

  Kind kind_ = Kind::finite;
  std::vector<double> head_;
  double first_ = 0.0;
  double ratio_ = 0.0;
  std::vector<double> cycle_;
  std::vector<WeightSeq> parts_;
};

struct MajorizationVerdict {
  bool holds = false;
  /// 1-based k of the first violated partial-sum inequality.
  std::optional<std::size_t> failing_index;
  /// sum(xi) - sum(eta)
  double sum_gap = 0.0;
};

struct KadisonReport {
  double a = 0.0;
  double b = 0.0;
  double alpha = 0.5;
  bool satisfied = false;
  std::optional<long long> integer_gap;
};

/// mu collects entries in (0, 1/2]; lambda collects 1 - x for x in (1/2, 1);
/// zeros and ones are counted.
struct SplitSeq {
  WeightSeq mu;
  WeightSeq lambda;
  Cardinal zeros;
  Cardinal ones;

  Cardinal M() const { return mu.length(); }
  Cardinal N() const { return lambda.length(); }
};

std::vector<double> rearrange_desc(std::span<const double> xi);
WeightSeq rearrange_desc(const WeightSeq& xi);

/// Does eta majorize xi (xi < eta)? The shorter sequence is padded with zeros.
/// Tolerances scale with max(1, sum |eta|).
MajorizationVerdict majorizes(std::span<const double> xi, std::span<const double> eta, double tol = kSumTol);
MajorizationVerdict majorizes(const WeightSeq& xi, const WeightSeq& eta, double tol = kSumTol);

KadisonReport kadison_check(const WeightSeq& xi, double alpha = 0.5);

SplitSeq split_mu_lambda(const WeightSeq& xi);

/// (1, ..., 1, r) with N ones where sum(xi) = N + r, 0 <= r < 1; r omitted when 0.
WeightSeq elem_eta_i(const WeightSeq& xi);

/// xi < (1, ..., 1, r1, r2) decided by the single inequality
/// sum_{j <= N+1} xi*_j <= N + r1, where N = sum(xi) - r1 - r2.
bool elem_check_ii(const WeightSeq& xi, double r1, double r2);

/// Exact sum of xi_j for j >= n (0-based), +infinity when divergent.
inline double tail_sum(const WeightSeq& xi, std::size_t n) { return xi.tail_sum(n); }

/// Nearest integer when x is within tol of one.
std::optional<long long> as_integer(double x, double tol = kIntegralityTol);

}  // namespace adm
