#include <doctest.h>

#include <cmath>

#include "adm/error.hpp"
#include "adm/stream.hpp"

using namespace adm;

TEST_CASE("orthonormal basis stream") {
  const auto s = ProjectionStream::orthonormal_basis();
  CHECK(s.is_infinite());
  CHECK(s.support_end(4) == 5);
  const auto v = s.vector(2, 4);
  CHECK(v.coords()[2] == Complex(1.0));
  CHECK((s.partial_sum(3, 3).matrix() - Matrix::Identity(3, 3)).norm() == 0.0);
  CHECK(s.truncated(3).size() == std::optional<std::size_t>(3));
  CHECK_THROWS_AS(s.truncated(3).vector(3, 5), Error);
}

TEST_CASE("explicit vector streams") {
  Vector a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  const auto s = ProjectionStream::explicit_vectors({a, b});
  CHECK(s.size() == std::optional<std::size_t>(2));
  CHECK(s.vector(1).coords()[1] == Complex(1.0));
}

TEST_CASE("block overlap vectors are deterministic and banded") {
  const auto s = ProjectionStream::block_overlap(3, 5);
  const auto t = ProjectionStream::block_overlap(3, 5);
  for (std::size_t k = 0; k < 10; ++k) {
    const auto v = s.vector(k, 20);
    CHECK((v.coords() - t.vector(k, 20).coords()).norm() == 0.0);
    CHECK(std::abs(v.coords().norm() - 1.0) < 1e-14);
    for (Eigen::Index i = 0; i < 20; ++i) {
      const bool inside = i >= static_cast<Eigen::Index>(k) && i < static_cast<Eigen::Index>(k + 3);
      if (!inside) CHECK(v.coords()[i] == Complex(0.0));
    }
  }
  const auto other = ProjectionStream::block_overlap(3, 6);
  CHECK((other.vector(0, 3).coords() - s.vector(0, 3).coords()).norm() > 1e-3);
  // Consecutive vectors overlap, so the partial sums are not projections.
  const auto p = s.partial_sum(4, s.support_end(3));
  CHECK(std::abs(p.trace() - 4.0) < 1e-13);
  CHECK((p.matrix() * p.matrix() - p.matrix()).norm() > 1e-3);
}
