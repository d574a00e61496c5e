#include <doctest.h>

#include <cmath>
#include <random>

#include "adm/error.hpp"
#include "adm/seqkit.hpp"
#include "testkit.hpp"

using namespace adm;

TEST_CASE("finite sequences index and sum directly") {
  const auto xi = WeightSeq::finite({0.2, 0.3, 0.5});
  CHECK(xi.length() == Cardinal(3));
  CHECK(xi.at(1) == 0.3);
  CHECK(xi.tail_sum(1) == doctest::Approx(0.8));
  CHECK(tail_sum(WeightSeq::finite({0.2, 0.3}), 2) == 0.0);
  CHECK_THROWS_AS(xi.at(3), Error);
  CHECK(xi.prefix(10).size() == 3);
}

TEST_CASE("geometric tails are exact") {
  const auto g = WeightSeq::geometric_tail({}, 0.5, 0.5);  // 2^-(j+1)
  CHECK(g.length().is_infinite());
  CHECK(g.tail_sum(1) == doctest::Approx(0.5).epsilon(1e-15));
  // Direct summation far enough out agrees with the closed form.
  for (std::size_t n : {0u, 3u, 17u}) {
    double s = 0.0;
    for (std::size_t j = 400; j-- > n;) s += g.at(j);
    CHECK(std::abs(s - g.tail_sum(n)) <= 1e-15);
  }
  CHECK(std::isinf(WeightSeq::periodic({}, {0.5}).tail_sum(5)));
  CHECK(std::isinf(WeightSeq::one_minus_geometric({}, 0.25, 0.5).total()));
}

TEST_CASE("interleave is round robin and skips exhausted parts") {
  const auto x = WeightSeq::interleave({WeightSeq::finite({0.1, 0.2}), WeightSeq::periodic({}, {0.9})});
  CHECK(x.at(0) == 0.1);
  CHECK(x.at(1) == 0.9);
  CHECK(x.at(2) == 0.2);
  CHECK(x.at(3) == 0.9);
  CHECK(x.at(4) == 0.9);
  const auto f = WeightSeq::interleave({WeightSeq::finite({1, 2, 3}), WeightSeq::finite({4})});
  CHECK(f.values() == std::vector<double>{1, 4, 2, 3});
}

TEST_CASE("rearrange_desc sorts") {
  CHECK(rearrange_desc(std::vector<double>{0.5, 1.0, 0.5}) == std::vector<double>{1.0, 0.5, 0.5});
  CHECK(rearrange_desc(std::vector<double>{}).empty());
  CHECK(rearrange_desc(std::vector<double>{0.3, 0.3}) == std::vector<double>{0.3, 0.3});
}

TEST_CASE("majorization verdicts") {
  std::vector<double> a{0.5, 0.5, 1.0}, b{1, 1};
  CHECK(majorizes(a, b).holds);
  std::vector<double> c{1, 0}, d{0.5, 0.5};
  auto v = majorizes(c, d);
  CHECK_FALSE(v.holds);
  REQUIRE(v.failing_index);
  CHECK(*v.failing_index == 1);
  std::vector<double> e{0.7, 0.3};
  CHECK(majorizes(e, e).holds);
  std::vector<double> f{0.5, 0.4};
  CHECK_FALSE(majorizes(f, e).holds);  // unequal totals
}

TEST_CASE("majorization agrees with a brute-force oracle") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(1, 6), q(0, 8);
  int disagreements = 0;
  for (int it = 0; it < 3000; ++it) {
    std::vector<double> xi(len(rng)), eta(len(rng));
    for (auto& x : xi) x = q(rng) / 4.0;
    for (auto& x : eta) x = q(rng) / 4.0;
    if (majorizes(xi, eta).holds != testkit::majorized_oracle(xi, eta, 1e-12)) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("Kadison condition examples") {
  // delta = 0.3 followed by ones
  auto k1 = kadison_check(WeightSeq::periodic({0.3}, {1.0}));
  CHECK(k1.a == doctest::Approx(0.3));
  CHECK(k1.b == 0.0);
  CHECK_FALSE(k1.satisfied);

  auto k2 = kadison_check(WeightSeq::periodic({}, {0.5}));
  CHECK(std::isinf(k2.a));
  CHECK(k2.satisfied);

  auto k3 = kadison_check(WeightSeq::finite({0.3, 0.9, 0.8}));
  CHECK(k3.a == doctest::Approx(0.3));
  CHECK(k3.b == doctest::Approx(0.3));
  CHECK(k3.satisfied);
  REQUIRE(k3.integer_gap);
  CHECK(*k3.integer_gap == 0);
}

TEST_CASE("split into mu and lambda") {
  auto s = split_mu_lambda(WeightSeq::finite({0.4, 0.9, 0, 1}));
  CHECK(s.mu.values() == std::vector<double>{0.4});
  REQUIRE(s.lambda.values().size() == 1);
  CHECK(s.lambda.values()[0] == doctest::Approx(0.1));
  CHECK(s.zeros == Cardinal(1));
  CHECK(s.ones == Cardinal(1));

  auto h = split_mu_lambda(WeightSeq::finite({0.5}));
  CHECK(h.mu.values() == std::vector<double>{0.5});
  CHECK(h.lambda.empty());

  auto g = split_mu_lambda(WeightSeq::geometric_tail({}, 0.25, 0.5));
  CHECK(g.M().is_infinite());
  CHECK(g.N() == Cardinal(0));
  CHECK(g.mu.at(3) == doctest::Approx(0.25 / 8));
}

TEST_CASE("elementary eta and the single-inequality test") {
  auto e = elem_eta_i(WeightSeq::finite({0.6, 0.6, 0.3})).values();
  REQUIRE(e.size() == 2);
  CHECK(e[0] == 1.0);
  CHECK(e[1] == doctest::Approx(0.5));
  CHECK(elem_eta_i(WeightSeq::finite({1, 1})).values() == std::vector<double>{1, 1});
  CHECK(elem_eta_i(WeightSeq::finite({0.25})).values() == std::vector<double>{0.25});

  CHECK(elem_check_ii(WeightSeq::finite({0.6, 0.6, 0.6}), 0.5, 0.3));
  CHECK(elem_check_ii(WeightSeq::finite({1, 1, 0.5, 0.3}), 0.5, 0.3));
  CHECK_FALSE(elem_check_ii(WeightSeq::finite({1, 0.9, 0.1}), 0.6, 0.4));
}

TEST_CASE("single-inequality test matches full majorization") {
  // For entries in [0, 1] and 0 < r2 <= r1 the one inequality decides
  // xi < (1, .., 1, r1, r2).
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int disagreements = 0;
  for (int it = 0; it < 2000; ++it) {
    std::vector<double> xi(2 + it % 5);
    for (auto& x : xi) x = std::round(u(rng) * 8) / 8;
    double s = 0.0;
    for (double x : xi) s += x;
    const double r1 = std::round(u(rng) * 8) / 8;
    const double frac = s - std::floor(s);
    // choose r2 so that N = s - r1 - r2 is a nonnegative integer
    double r2 = frac - r1;
    if (r2 < 0) r2 += 1.0;
    if (r2 <= 0.0 || r2 > r1 || s - r1 - r2 < -1e-12) continue;
    const long long N = std::llround(s - r1 - r2);
    std::vector<double> eta(static_cast<std::size_t>(N), 1.0);
    eta.push_back(r1);
    eta.push_back(r2);
    const bool full = testkit::majorized_oracle(xi, eta, 1e-12);
    if (full != elem_check_ii(WeightSeq::finite(xi), r1, r2)) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("tail sums at the boundary examples") {
  CHECK(tail_sum(WeightSeq::geometric_tail({}, 0.5, 0.5), 1) == doctest::Approx(0.5));
  CHECK(tail_sum(WeightSeq::finite({0.2, 0.3}), 1) == doctest::Approx(0.3));
  CHECK(std::isinf(tail_sum(WeightSeq::periodic({}, {0.5}), 5)));
}

TEST_CASE("integrality helper") {
  CHECK(as_integer(2.0 + 1e-12) == 2);
  CHECK_FALSE(as_integer(0.5).has_value());
  CHECK_FALSE(as_integer(INFINITY).has_value());
}
