#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "adm/operators.hpp"

namespace adm {

/// Lazy stream of finitely supported unit vectors u_0, u_1, ... defining
/// A = sum_k u_k (x) u_k. Vector k lives in coordinates [0, support_end(k)),
/// so any finite partial sum is an exact finite matrix.
class ProjectionStream {
 public:
  enum class Kind { orthonormal_basis, explicit_vectors, block_overlap };

  /// u_k = e_k.
  static ProjectionStream orthonormal_basis();
  /// A finite list; every vector must have unit norm.
  static ProjectionStream explicit_vectors(std::vector<Vector> vectors);
  /// u_k supported on [k, k + block) with seeded complex Gaussian
  /// coefficients, normalised. Neighbouring vectors overlap, so the
  /// partial sums are not diagonal.
  static ProjectionStream block_overlap(std::size_t block, std::uint64_t seed = 0);

  Kind kind() const noexcept { return kind_; }
  /// Number of vectors; nullopt for an infinite stream.
  std::optional<std::size_t> size() const;
  bool is_infinite() const { return !size().has_value(); }
  /// The first n vectors only.
  ProjectionStream truncated(std::size_t n) const;

  std::size_t block() const noexcept { return block_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<Vector>& vectors() const noexcept { return vectors_; }
  std::optional<std::size_t> count() const noexcept { return count_; }

  /// One past the last coordinate where u_k may be nonzero.
  Eigen::Index support_end(std::size_t k) const;
  /// u_k zero-padded to dim >= support_end(k).
  UnitVec vector(std::size_t k, Eigen::Index dim) const;
  UnitVec vector(std::size_t k) const { return vector(k, support_end(k)); }

  /// sum_{k < n} u_k (x) u_k in dimension dim.
  HermOp partial_sum(std::size_t n, Eigen::Index dim) const;

 private:
  void check_index(std::size_t k) const;

  Kind kind_ = Kind::orthonormal_basis;
  std::vector<Vector> vectors_;
  std::size_t block_ = 1;
  std::uint64_t seed_ = 0;
  std::optional<std::size_t> count_;
};

}  // namespace adm
