#include "adm/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adm/error.hpp"

namespace adm {

namespace {

Eigen::SelfAdjointEigenSolver<Matrix> eig(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  require(es.info() == Eigen::Success, Reason::assertion, "eigensolver did not converge");
  return es;
}

// Sum over eigenpairs of f(lambda) q q*, skipping terms where f returns 0.
template <class F>
Matrix spectral_map(const Eigen::SelfAdjointEigenSolver<Matrix>& es, F f) {
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  Matrix out = Matrix::Zero(vecs.rows(), vecs.rows());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    double fx = f(vals[i]);
    if (fx != 0.0) out += fx * vecs.col(i) * vecs.col(i).adjoint();
  }
  return out;
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

Vector pad(const Vector& v, Eigen::Index dim) {
  require(dim >= v.size(), Reason::dimension, "cannot pad to a smaller dimension");
  Vector out = Vector::Zero(dim);
  out.head(v.size()) = v;
  return out;
}

Matrix pad(const Matrix& m, Eigen::Index dim) {
  require(dim >= m.rows() && dim >= m.cols(), Reason::dimension, "cannot pad to a smaller dimension");
  Matrix out = Matrix::Zero(dim, dim);
  out.topLeftCorner(m.rows(), m.cols()) = m;
  return out;
}

HermOp::HermOp(Matrix m) {
  require(m.rows() == m.cols(), Reason::dimension, "operator must be square");
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    require(std::isfinite(m.data()[i].real()) && std::isfinite(m.data()[i].imag()), Reason::out_of_range,
            "operator entries must be finite");
  }
  const double skew = (m - m.adjoint()).norm();
  require(skew <= 1e-12 * static_cast<double>(std::max<Eigen::Index>(1, m.rows())), Reason::not_hermitian,
          "operator is not Hermitian (||M - M*||_F = " + std::to_string(skew) + ")");
  m_ = hermitian_part(m);
}

HermOp HermOp::zero(Eigen::Index dim) { return HermOp(Matrix::Zero(dim, dim), trusted{}); }

HermOp HermOp::identity(Eigen::Index dim) { return HermOp(Matrix::Identity(dim, dim), trusted{}); }

HermOp HermOp::diagonal(std::span<const double> d) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  return HermOp(std::move(m));
}

HermOp operator+(const HermOp& x, const HermOp& y) {
  require(x.dim() == y.dim(), Reason::dimension, "operator dimensions differ");
  return HermOp(x.m_ + y.m_, HermOp::trusted{});
}

HermOp operator-(const HermOp& x, const HermOp& y) {
  require(x.dim() == y.dim(), Reason::dimension, "operator dimensions differ");
  return HermOp(x.m_ - y.m_, HermOp::trusted{});
}

UnitVec::UnitVec(Vector v) : v_(std::move(v)) {
  require(std::abs(v_.norm() - 1.0) <= 1e-12, Reason::precondition, "vector is not of unit norm");
}

UnitVec UnitVec::normalized(const Vector& v) {
  const double n = v.norm();
  require(n > 0.0 && std::isfinite(n), Reason::precondition, "cannot normalize a zero vector");
  return UnitVec(v / n);
}

UnitVec UnitVec::basis(Eigen::Index dim, Eigen::Index k) {
  require(k >= 0 && k < dim, Reason::dimension, "basis index out of range");
  Vector e = Vector::Zero(dim);
  e[k] = 1.0;
  return UnitVec(std::move(e));
}

UnitVec UnitVec::padded(Eigen::Index dim) const {
  UnitVec out = *this;
  out.v_ = pad(v_, dim);
  return out;
}

void RankOneDecomp::add(double weight, UnitVec v) {
  require(std::isfinite(weight) && weight >= 0.0, Reason::out_of_range, "weights must be nonnegative");
  if (terms_.empty() && dim_ == 0) dim_ = v.dim();
  require(v.dim() == dim_, Reason::dimension,
          "term dimension " + std::to_string(v.dim()) + " differs from " + std::to_string(dim_));
  terms_.push_back({weight, std::move(v)});
}

void RankOneDecomp::append(const RankOneDecomp& other) {
  for (const auto& t : other.terms_) add(t.weight, t.vector);
}

std::vector<double> RankOneDecomp::weights() const {
  std::vector<double> w;
  w.reserve(terms_.size());
  for (const auto& t : terms_) w.push_back(t.weight);
  return w;
}

RankOneDecomp RankOneDecomp::padded(Eigen::Index dim) const {
  RankOneDecomp out(dim);
  for (const auto& t : terms_) out.add(t.weight, t.vector.padded(dim));
  return out;
}

std::vector<double> spectrum_desc(const HermOp& a) {
  if (a.dim() == 0) return {};
  auto es = eig(a.matrix());
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

bool is_psd(const HermOp& a, double tol) {
  auto s = spectrum_desc(a);
  return s.empty() || s.back() >= -tol;
}

WeightSeq eigenvalues_desc(const HermOp& a) {
  auto s = spectrum_desc(a);
  require(s.empty() || s.back() >= -kEigTol, Reason::not_psd,
          "operator has a negative eigenvalue " + (s.empty() ? std::string() : std::to_string(s.back())));
  for (double& x : s) x = std::max(x, 0.0);
  return WeightSeq::finite(std::move(s));
}

HermOp sqrt_psd(const HermOp& a) {
  if (a.dim() == 0) return a;
  auto es = eig(a.matrix());
  require(es.eigenvalues().minCoeff() >= -kEigTol, Reason::not_psd, "sqrt_psd needs a PSD operator");
  return HermOp(hermitian_part(spectral_map(es, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; })));
}

HermOp range_projection(const HermOp& a) {
  if (a.dim() == 0) return a;
  auto es = eig(a.matrix());
  return HermOp(hermitian_part(spectral_map(es, [](double x) { return x > kEigTol ? 1.0 : 0.0; })));
}

PartialIsometryRec polar_partial_isometry(const Matrix& b) {
  const Eigen::Index cols = b.cols();
  if (cols == 0 || b.rows() == 0) return {Matrix::Zero(b.rows(), cols), HermOp::zero(cols)};
  auto es = eig(b.adjoint() * b);
  Matrix inv_sqrt = spectral_map(es, [](double x) { return x > kEigTol ? 1.0 / std::sqrt(x) : 0.0; });
  Matrix domain = spectral_map(es, [](double x) { return x > kEigTol ? 1.0 : 0.0; });
  return {b * inv_sqrt, HermOp(hermitian_part(domain))};
}

HermOp frame_operator(const RankOneDecomp& d) {
  Matrix m = Matrix::Zero(d.dim(), d.dim());
  for (const auto& t : d.terms()) {
    const Vector& v = t.vector.coords();
    m.noalias() += t.weight * (v * v.adjoint());
  }
  return HermOp(std::move(m));
}

double residual_norm(const HermOp& a, const RankOneDecomp& d) {
  require(a.dim() == d.dim() || d.empty(), Reason::dimension, "operator and decomposition dimensions differ");
  if (d.empty()) return a.matrix().norm();
  return (a.matrix() - frame_operator(d).matrix()).norm();
}

HermOp positive_part(const HermOp& a) {
  if (a.dim() == 0) return a;
  auto es = eig(a.matrix());
  return HermOp(hermitian_part(spectral_map(es, [](double x) { return x > 0.0 ? x : 0.0; })));
}

}  // namespace adm
