#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "adm/seqkit.hpp"

namespace adm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Eigenvalues within this window of zero are treated as zero: it decides
/// rank, range projections and the clamp of tiny negative eigenvalues.
inline constexpr double kEigTol = 1e-10;

/// (x, y) = sum_i x_i conj(y_i), linear in the first argument.
inline Complex inner(const Vector& x, const Vector& y) { return y.dot(x); }

/// Zero-extends v to dimension dim (dim >= v.size()).
Vector pad(const Vector& v, Eigen::Index dim);
/// Zero-extends a square matrix to dim x dim.
Matrix pad(const Matrix& m, Eigen::Index dim);

/// Finite-dimensional Hermitian operator. Construction checks
/// ||M - M*||_F <= 1e-12 * dim and stores the Hermitian part.
class HermOp {
 public:
  HermOp() = default;
  explicit HermOp(Matrix m);

  static HermOp zero(Eigen::Index dim);
  static HermOp identity(Eigen::Index dim);
  static HermOp diagonal(std::span<const double> d);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double trace() const { return m_.trace().real(); }

  HermOp padded(Eigen::Index dim) const { return HermOp(pad(m_, dim), trusted{}); }

  friend HermOp operator+(const HermOp& x, const HermOp& y);
  friend HermOp operator-(const HermOp& x, const HermOp& y);

 private:
  struct trusted {};
  HermOp(Matrix m, trusted) : m_(std::move(m)) {}

  Matrix m_;
};

/// Unit vector (||v|| = 1 within 1e-12).
class UnitVec {
 public:
  explicit UnitVec(Vector v);

  /// v / ||v||; v must be nonzero.
  static UnitVec normalized(const Vector& v);
  static UnitVec basis(Eigen::Index dim, Eigen::Index k);

  Eigen::Index dim() const noexcept { return v_.size(); }
  const Vector& coords() const noexcept { return v_; }
  UnitVec padded(Eigen::Index dim) const;

 private:
  Vector v_;
};

struct RankOneTerm {
  double weight = 0.0;
  UnitVec vector;
};

/// Ordered list of (weight, unit vector) pairs; represents sum w_j v_j v_j*.
class RankOneDecomp {
 public:
  explicit RankOneDecomp(Eigen::Index dim = 0) : dim_(dim) {}

  void add(double weight, UnitVec v);
  void append(const RankOneDecomp& other);

  Eigen::Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  const std::vector<RankOneTerm>& terms() const noexcept { return terms_; }
  const RankOneTerm& operator[](std::size_t i) const { return terms_[i]; }
  std::vector<double> weights() const;

  /// Zero-extends every vector to the new ambient dimension.
  RankOneDecomp padded(Eigen::Index dim) const;

 private:
  Eigen::Index dim_;
  std::vector<RankOneTerm> terms_;
};

/// V with V*V equal to domain_projection.
struct PartialIsometryRec {
  Matrix matrix;
  HermOp domain_projection;
};

/// All eigenvalues, non-increasing.
std::vector<double> spectrum_desc(const HermOp& a);
/// Eigenvalues of a PSD operator with multiplicity, non-increasing, with
/// values in [-kEigTol, 0) clamped to 0. Throws not_psd otherwise.
WeightSeq eigenvalues_desc(const HermOp& a);
bool is_psd(const HermOp& a, double tol = kEigTol);

HermOp sqrt_psd(const HermOp& a);
/// Projection onto the span of eigenvectors with eigenvalue > kEigTol.
HermOp range_projection(const HermOp& a);
/// B = V (B*B)^{1/2}, computed from the eigendecomposition of B*B.
PartialIsometryRec polar_partial_isometry(const Matrix& b);

HermOp frame_operator(const RankOneDecomp& d);
/// ||A - frame_operator(d)||_F
double residual_norm(const HermOp& a, const RankOneDecomp& d);

/// Positive and negative parts through the spectral decomposition.
HermOp positive_part(const HermOp& a);

}  // namespace adm
