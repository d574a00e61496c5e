#include "adm/bridge.hpp"

#include <cmath>
#include <string>

#include "adm/error.hpp"

namespace adm {

namespace {

Matrix analysis_rows(const RankOneDecomp& d, const std::vector<std::size_t>& rows) {
  Matrix b = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), d.dim());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& t = d[rows[r]];
    b.row(static_cast<Eigen::Index>(r)) = std::sqrt(t.weight) * t.vector.coords().adjoint();
  }
  return b;
}

Matrix herm(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

std::vector<double> diagonal_of(const Matrix& m) {
  std::vector<double> out(static_cast<std::size_t>(std::min(m.rows(), m.cols())));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  }
  return out;
}

BridgeRecord decomp_to_isometry(const RankOneDecomp& d) {
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (d[j].weight >= kBridgeWeightFloor) kept.push_back(j);
  }
  Matrix b = analysis_rows(d, kept);
  HermOp a(herm(b.adjoint() * b));
  PartialIsometryRec v = polar_partial_isometry(b);
  std::vector<double> diag = diagonal_of(v.matrix * a.matrix() * v.matrix.adjoint());
  return {std::move(a), d, std::move(b), std::move(v), std::move(diag), std::move(kept)};
}

RankOneDecomp isometry_to_decomp(const HermOp& A, const Matrix& V) {
  require(V.cols() == A.dim(), Reason::dimension,
          "isometry has " + std::to_string(V.cols()) + " columns, operator dimension is " + std::to_string(A.dim()));
  const double off = (V.adjoint() * V - range_projection(A).matrix()).norm();
  require(off <= 1e-10, Reason::not_isometry,
          "V*V differs from the range projection of A (" + std::to_string(off) + ")");

  RankOneDecomp out(A.dim());
  if (V.rows() == 0 || A.dim() == 0) return out;
  const Matrix root = sqrt_psd(A).matrix();
  const Matrix vav = V * A.matrix() * V.adjoint();
  for (Eigen::Index j = 0; j < V.rows(); ++j) {
    const double xi = vav(j, j).real();
    if (xi <= kBridgeWeightFloor) continue;
    Vector v = root * V.row(j).adjoint();
    out.add(xi, UnitVec::normalized(v));
  }
  return out;
}

HermOp gram_matrix(const RankOneDecomp& d) {
  std::vector<std::size_t> all(d.size());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  Matrix b = analysis_rows(d, all);
  return HermOp(herm(b * b.adjoint()));
}

}  // namespace adm
