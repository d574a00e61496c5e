#pragma once

#include <optional>
#include <span>
#include <vector>

#include "adm/operators.hpp"
#include "adm/seqkit.hpp"

namespace adm {

struct SumOfProjReport {
  double excess = 0.0;      ///< tr((A - I)_+)
  double deficiency = 0.0;  ///< tr((I - A)_+ R_A)
  double gap = 0.0;         ///< excess - deficiency
  bool is_sum = false;      ///< gap is a nonnegative integer (within 1e-9)
  /// Number of projections when is_sum: tr(A).
  std::optional<long long> count;
  std::optional<RankOneDecomp> witness;
  double witness_residual = 0.0;
};

/// Decides whether a finite PSD A is a sum of rank-one projections. With
/// `with_witness`, builds tr(A) projections through the Horn chain on the
/// eigenvectors of A.
SumOfProjReport sum_of_projections_check(const HermOp& A, bool with_witness = false);

/// |sum(xi) - tr(A)| <= 1e-10.
bool trace_admissibility_check(std::span<const double> xi, const HermOp& A);

struct ProjDiagReport {
  bool adm_P = false;
  bool adm_complement = false;
  bool unitary_orbit = false;
};

/// For xi in [0, 1] satisfying the Kadison condition: xi is admissible for
/// a projection of rank p_rank iff sum(xi) = p_rank, for its complement iff
/// sum(1 - xi) = codim; both together place diag(xi) in the unitary orbit.
ProjDiagReport projection_diag_check(const WeightSeq& xi, Cardinal p_rank, Cardinal codim);

/// sum(1 - xi_j), +infinity when divergent.
double complement_total(const WeightSeq& xi);

struct IneqReport {
  bool holds = false;
  double lhs = 0.0;  ///< tr((A - I)_+)
  double rhs = 0.0;  ///< sum of (w_j - 1) over w_j > 1
};

/// Requires frame_operator(d) <= A (within 1e-9, checked spectrally).
IneqReport ineq_check(const HermOp& A, const RankOneDecomp& d);

struct AdmTransform {
  enum class Mode { direct_sum, convex_mix, split };
  Mode mode = Mode::direct_sum;
  double t = 0.5;           ///< convex_mix weight of d1
  std::vector<double> eta;  ///< split amounts, one per leading term of d1
};

/// direct_sum: terms of d1 and d2 interleaved (frame operators add).
/// convex_mix: t d1 interleaved with (1 - t) d2, both of the same operator.
/// split: each term (w, v) becomes (eta_j, v), (w - eta_j, v).
RankOneDecomp adm_transform(const RankOneDecomp& d1, const std::optional<RankOneDecomp>& d2, const AdmTransform& mode);

}  // namespace adm
