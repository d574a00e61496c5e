#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adm/horn.hpp"
#include "adm/operators.hpp"
#include "adm/seqkit.hpp"
#include "adm/stream.hpp"

namespace adm {

enum class CaseKind { finite_rank, mu_diverges, lambda_diverges, both_summable, m_finite_n_inf };

/// "FINITE_RANK", "MU_DIVERGES", ...
std::string case_name(CaseKind c);

struct CaseTag {
  CaseKind kind = CaseKind::finite_rank;
  /// sum(lambda) - sum(mu), when both are finite.
  std::optional<long long> k;
  Cardinal M;
  Cardinal N;
};

/// Drops the 0 and 1 entries; what remains is split into mu (entries in
/// (0, 1/2]) and lambda (1 - x for entries in (1/2, 1)).
inline SplitSeq strip01(const WeightSeq& xi) { return split_mu_lambda(xi); }

/// Case of the split core. Throws kadison when k = sum(lambda) - sum(mu) is
/// finite but not an integer, unclassifiable when no case applies.
CaseTag classify_case(const SplitSeq& s);
CaseTag classify_case(const WeightSeq& xi);

/// Where a realized weight came from: entry `index` (0-based) of mu, of
/// lambda (the term carries weight 1 - lambda_index), of the zeros or ones,
/// or of the original sequence when no split was made.
struct TermOrigin {
  enum class Part { xi, mu, lambda, zero, one };
  Part part = Part::xi;
  std::size_t index = 0;
};

std::string origin_label(const TermOrigin& o);

/// A weight placed directly on one E vector (no mixing needed).
struct DirectTerm {
  TermOrigin origin;
  double weight = 0.0;
  std::size_t target = 0;
};

/// One block of a planner. Targets are positions in the core's E sequence,
/// aligned with eta. The block weights are majorized by eta (checked before
/// realization) and carry the same total.
struct BlockPlan {
  std::size_t stage = 0;  ///< 1-based
  std::vector<TermOrigin> sources;
  std::vector<double> weights;
  std::vector<std::size_t> targets;
  std::vector<double> eta;
  double r_in = 0.0;
  double r_out = 0.0;
  /// Core E position left holding r_out after this block. The next block
  /// starts there with 1 - r_out unless the frontier is closed (the block
  /// itself or its direct terms fill it).
  std::size_t frontier = 0;
  bool frontier_open = true;
  /// Indices added past the proof's choice because the majorization check
  /// failed in floating point.
  std::size_t extensions = 0;
  /// Result of the single-inequality test for (1-r_in, 1, ..., 1, r_out),
  /// when it applies.
  std::optional<bool> elem_check;
  std::vector<DirectTerm> direct;
  /// Mass still owed on `pending_target` by terms not yet emitted.
  double pending = 0.0;
  std::size_t pending_target = 0;
};

struct PlannerOptions {
  double tol = kSumTol;
  std::size_t extend_limit = 10000;
};

std::vector<BlockPlan> plan_mu_diverges(const SplitSeq& s, std::size_t stages, const PlannerOptions& opts = {});

struct LambdaPlan {
  /// Bin k holds mu indices; bins are filled first fit with capacity 1,
  /// and an infinite mu tail goes into one final bin.
  std::vector<std::vector<std::size_t>> bins;
  std::vector<double> s;
  /// First mu index of the tail bin (== mu length when mu is finite).
  std::size_t tail_start = 0;
  std::vector<BlockPlan> plans;
};

LambdaPlan plan_lambda_diverges(const SplitSeq& s, std::size_t stages, const PlannerOptions& opts = {});

std::vector<BlockPlan> plan_both_summable(const SplitSeq& s, std::size_t stages, const PlannerOptions& opts = {});

/// Head block of the M finite / N infinite case plus the data handed to the
/// key-case recursion.
struct MFinitePlan {
  long long k = 0;
  std::size_t n = 0;  ///< lambda entries used in the head
  double r = 0.0;     ///< tail_sum(lambda, n) < 1
  BlockPlan head;
  /// Core E position of u_1 in the key case; its coefficient is 1 - r.
  std::size_t key_start = 0;
};

MFinitePlan plan_m_finite(const SplitSeq& s, const PlannerOptions& opts = {});

/// Record of one key-case step, n = 1, 2, ...
struct KeycaseStep {
  std::size_t n = 0;
  Complex sigma;
  Complex tau;
  double sigma_bound = 0.0;  ///< z_o = (1 - T_{n-1}) T_n / (T_{n-1} (1 - T_n))
  double tail_before = 0.0;  ///< T_{n-1}
  double tail_after = 0.0;   ///< T_n
  /// Coefficients of w_{n+1} in u_1, ..., u_{n+1} (the proof's x vector).
  std::vector<Complex> x;
  double x_norm = 0.0;
  /// max_k |x_k|^2 - bound_k over the proof's decay bound (<= 0 when it holds).
  double decay_excess = 0.0;
  double residual = 0.0;
};

struct KeycaseResult {
  RankOneDecomp prefix;  ///< (1 - lambda_j, v_j), j < stages
  std::vector<KeycaseStep> steps;
  UnitVec carry;         ///< w after the last step
  double carry_weight = 0.0;
  double max_residual = 0.0;
};

/// Realizes 1 - lambda in B = (1 - sum lambda) u_1 (x) u_1 + sum_{j >= 2} u_j (x) u_j
/// for `stages` steps. Step n mixes the carried vector (weight 1 - T_{n-1})
/// with the next u (weight 1) into (1 - lambda_n) v_n and (1 - T_n) w_{n+1},
/// where T_n is the tail sum of lambda after entry n.
/// Each step checks the partial-sum identity, |sigma|^2 <= z_o and
/// ||x|| <= 1; throws assertion if any fails.
KeycaseResult keycase_recursion(const WeightSeq& lambda, const ProjectionStream& u, std::size_t stages,
                                double tol = 1e-9);

struct StageCertificate {
  std::size_t stage = 0;
  CaseKind kind = CaseKind::finite_rank;
  BlockPlan plan;
  /// Frobenius norm of emitted + outstanding - (sum of consumed E + r E_frontier).
  double residual = 0.0;
  std::size_t terms_emitted = 0;  ///< cumulative
  std::size_t e_touched = 0;      ///< cumulative number of stream vectors touched
  /// Stream index left holding `remainder`, if any.
  std::optional<std::size_t> frontier_e;
  double remainder = 0.0;
  /// Weight of terms owed but not yet emitted (lazy tails, key-case carry).
  double outstanding = 0.0;
  Eigen::Index ambient_dim = 0;
  /// sigma bound data when the stage is a key-case step.
  std::optional<KeycaseStep> keycase;
};

struct CarpenterOptions {
  std::size_t stages = 10;
  double tol = 1e-8;
  std::size_t extend_limit = 10000;
};

struct CarpenterResult {
  CaseTag tag;
  RankOneDecomp decomp;
  std::vector<TermOrigin> origins;
  std::vector<StageCertificate> certificates;
  double max_residual = 0.0;
  Eigen::Index ambient_dim = 0;
  /// Truncation of A the prefix is certified against after the last stage:
  /// the touched stream vectors, minus the unused part of the frontier and
  /// minus the outstanding terms. Its distance to the prefix's frame
  /// operator is the last certificate's residual.
  HermOp target;
};

struct FiniteRankResult {
  RankOneDecomp decomp;
  std::vector<TermOrigin> origins;
  std::size_t m = 0;  ///< head length
  double r = 0.0;
  double pending = 0.0;  ///< tail mass not emitted (infinite tails only)
  double residual = 0.0;
};

/// sum(xi) = n = |E|: the first m entries go through the Horn chain against
/// (1, ..., 1, r) on E_1..E_n, the rest lie on E_n. Infinite tails are
/// emitted up to `tail_terms` entries and the rest reported as pending.
FiniteRankResult decompose_finite_rank(const WeightSeq& xi, std::span<const UnitVec> e, std::size_t tail_terms = 64);

/// The whole construction on a stream: strip 0/1, classify, plan, realize,
/// certify. Throws kadison, trace_mismatch or assertion.
CarpenterResult carpenter_decompose(const WeightSeq& xi, const ProjectionStream& e,
                                    const CarpenterOptions& opts = {});

/// Same, from an explicit split (no 0/1 entries) and a chosen case. Useful
/// when mu holds entries above 1/2, which the lambda planner accepts.
CarpenterResult realize_split(const SplitSeq& s, CaseKind kind, const ProjectionStream& e,
                              const CarpenterOptions& opts = {});

}  // namespace adm
