#pragma once

#include <cstddef>
#include <vector>

#include "adm/operators.hpp"

namespace adm {

/// Weights below this are dropped when building the analysis operator.
inline constexpr double kBridgeWeightFloor = 1e-12;

struct BridgeRecord {
  HermOp A;
  RankOneDecomp decomp;
  /// Analysis operator: row j is sqrt(w_j) v_j* for each kept term.
  Matrix B;
  PartialIsometryRec V;
  /// diag(V A V*), one entry per kept term.
  std::vector<double> diag;
  /// Positions in `decomp` of the kept terms.
  std::vector<std::size_t> kept;
};

/// Builds B, A = B*B and the polar factor V of B, so that V*V = R_A and
/// diag(V A V*) lists the (nonzero) weights of d.
BridgeRecord decomp_to_isometry(const RankOneDecomp& d);

/// Inverse direction: xi_j = (V A V*)_jj and v_j = A^{1/2} V* e_j / sqrt(xi_j)
/// for xi_j > kBridgeWeightFloor. Requires V*V = R_A within 1e-10.
RankOneDecomp isometry_to_decomp(const HermOp& A, const Matrix& V);

/// G_ij = sqrt(w_i w_j) (v_j, v_i); one row per term, zero weights included.
HermOp gram_matrix(const RankOneDecomp& d);

/// Real parts of the main diagonal.
std::vector<double> diagonal_of(const Matrix& m);

}  // namespace adm
