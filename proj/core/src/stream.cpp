#include "adm/stream.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "adm/error.hpp"

namespace adm {

namespace {

// Uniform in (0, 1] from the top 53 bits; std::generate_canonical and
// std::normal_distribution are not specified bit-for-bit across libraries.
double unit_open(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; }

Complex gaussian(std::mt19937_64& rng) {
  const double r = std::sqrt(-2.0 * std::log(unit_open(rng)));
  const double t = 2.0 * std::numbers::pi * unit_open(rng);
  return {r * std::cos(t), r * std::sin(t)};
}

}  // namespace

ProjectionStream ProjectionStream::orthonormal_basis() { return ProjectionStream(); }

ProjectionStream ProjectionStream::explicit_vectors(std::vector<Vector> vectors) {
  for (const auto& v : vectors) {
    require(std::abs(v.norm() - 1.0) <= 1e-12, Reason::precondition, "stream vectors must have unit norm");
  }
  ProjectionStream s;
  s.kind_ = Kind::explicit_vectors;
  s.vectors_ = std::move(vectors);
  return s;
}

ProjectionStream ProjectionStream::block_overlap(std::size_t block, std::uint64_t seed) {
  require(block >= 1, Reason::precondition, "block-overlap needs block >= 1");
  ProjectionStream s;
  s.kind_ = Kind::block_overlap;
  s.block_ = block;
  s.seed_ = seed;
  return s;
}

std::optional<std::size_t> ProjectionStream::size() const {
  if (kind_ == Kind::explicit_vectors) {
    return count_ ? std::min(*count_, vectors_.size()) : vectors_.size();
  }
  return count_;
}

ProjectionStream ProjectionStream::truncated(std::size_t n) const {
  ProjectionStream s = *this;
  s.count_ = count_ ? std::min(*count_, n) : n;
  return s;
}

void ProjectionStream::check_index(std::size_t k) const {
  auto n = size();
  require(!n || k < *n, Reason::out_of_range,
          "stream index " + std::to_string(k) + " past the end (" + std::to_string(n.value_or(0)) + " vectors)");
}

Eigen::Index ProjectionStream::support_end(std::size_t k) const {
  check_index(k);
  switch (kind_) {
    case Kind::orthonormal_basis: return static_cast<Eigen::Index>(k + 1);
    case Kind::explicit_vectors: return vectors_[k].size();
    case Kind::block_overlap: return static_cast<Eigen::Index>(k + block_);
  }
  return 0;
}

UnitVec ProjectionStream::vector(std::size_t k, Eigen::Index dim) const {
  const Eigen::Index end = support_end(k);
  require(dim >= end, Reason::dimension, "requested dimension is smaller than the vector's support");
  switch (kind_) {
    case Kind::orthonormal_basis: return UnitVec::basis(dim, static_cast<Eigen::Index>(k));
    case Kind::explicit_vectors: return UnitVec(pad(vectors_[k], dim));
    case Kind::block_overlap: {
      std::mt19937_64 rng(seed_ * 1000003ULL + k);
      Vector v = Vector::Zero(dim);
      for (std::size_t i = 0; i < block_; ++i) v[static_cast<Eigen::Index>(k + i)] = gaussian(rng);
      return UnitVec::normalized(v);
    }
  }
  fail(Reason::assertion, "unknown stream kind");
}

HermOp ProjectionStream::partial_sum(std::size_t n, Eigen::Index dim) const {
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < n; ++k) {
    const Vector v = vector(k, dim).coords();
    m.noalias() += v * v.adjoint();
  }
  return HermOp(0.5 * (m + m.adjoint()));
}

}  // namespace adm
