#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "adm/error.hpp"
#include "adm/horn.hpp"
#include "testkit.hpp"

using namespace adm;

namespace {

UnitVec e(Eigen::Index dim, Eigen::Index k) { return UnitVec::basis(dim, k); }

Matrix two_term(double a, const UnitVec& x, double b, const UnitVec& y) {
  return a * x.coords() * x.coords().adjoint() + b * y.coords() * y.coords().adjoint();
}

}  // namespace

TEST_CASE("2x2 lemma with orthogonal vectors") {
  const auto m = mix_two(1.0, 0.2, e(2, 0), e(2, 1), 0.7, 0.5);
  // h = 0: sigma^2 = z_o = 0.5 / 0.56, tau^2 = 0.2 / 0.7 - 0.2 z_o
  CHECK(std::norm(m.sigma) == doctest::Approx(0.5 / 0.56).epsilon(1e-14));
  CHECK(std::norm(m.tau) == doctest::Approx(0.2 / 0.7 - 0.2 * 0.5 / 0.56).epsilon(1e-13));
  CHECK(std::norm(m.sigma_prime) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(std::norm(m.tau_prime) == doctest::Approx(0.25).epsilon(1e-13));
  const Complex off = 0.7 * m.sigma * std::conj(m.tau) + 0.5 * m.sigma_prime * std::conj(m.tau_prime);
  CHECK(std::abs(off) < 1e-15);
  CHECK((two_term(0.7, m.w, 0.5, m.w_prime) - two_term(1.0, e(2, 0), 0.2, e(2, 1))).norm() < 1e-15);
}

TEST_CASE("2x2 lemma trivial branches") {
  std::mt19937_64 rng(1);
  const auto u = testkit::random_unit(rng, 2);
  const auto v = testkit::random_unit(rng, 2);
  const auto id = mix_two(0.9, 0.1, u, v, 0.9, 0.1);
  CHECK(id.branch == MixResult::Branch::identity);
  CHECK(id.sigma == Complex(1.0));
  CHECK(id.tau == Complex(0.0));
  CHECK((id.w.coords() - u.coords()).norm() == 0.0);

  const auto sw = mix_two(0.9, 0.1, u, v, 0.1, 0.9);
  CHECK(sw.branch == MixResult::Branch::swap);
  CHECK(sw.sigma == Complex(0.0));
  CHECK(std::abs(sw.tau) == doctest::Approx(1.0));
  CHECK(std::abs(std::abs(inner(sw.w.coords(), v.coords())) - 1.0) < 1e-15);
}

TEST_CASE("2x2 lemma refuses bad input") {
  CHECK_THROWS_AS(mix_two(0.5, 0.5, e(2, 0), e(2, 1), 0.5, 0.5), Error);
  CHECK_THROWS_AS(mix_two(1.0, 0.2, e(2, 0), e(2, 1), 1.1, 0.1), Error);
  CHECK_THROWS_AS(mix_two(1.0, 0.2, e(2, 0), e(3, 1), 0.7, 0.5), Error);
}

TEST_CASE("2x2 lemma conclusions on random oblique pairs, both orders of eta") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int it = 0; it < 2000; ++it) {
    const double eta1 = 2.0 * u01(rng);
    double eta2 = 2.0 * u01(rng);
    if (std::abs(eta1 - eta2) < 1e-6) continue;
    const double lo = std::min(eta1, eta2), hi = std::max(eta1, eta2);
    const double xi1 = lo + (hi - lo) * u01(rng);
    const double xi2 = eta1 + eta2 - xi1;
    if (xi1 <= 0.0) continue;
    const auto u = testkit::random_unit(rng, 2);
    const auto v = testkit::random_unit(rng, 2);
    const auto m = mix_two(eta1, eta2, u, v, xi1, xi2);
    const double res = (two_term(xi1, m.w, xi2, m.w_prime) - two_term(eta1, u, eta2, v)).norm();
    CHECK(res <= 1e-10);
    CHECK(std::norm(m.sigma) + std::norm(m.tau) <= 1.0 + 1e-12);
    const double z_o = eta1 * (eta1 - xi2) / (xi1 * (eta1 - eta2));
    CHECK(std::norm(m.sigma) <= z_o + 1e-12);
    CHECK(std::abs(m.ellipse_residual()) <= 1e-10);
    // w really is sigma u + tau u'
    CHECK((m.sigma * u.coords() + m.tau * v.coords() - m.w.coords()).norm() <= 1e-10);
    CHECK((m.sigma_prime * u.coords() + m.tau_prime * v.coords() - m.w_prime.coords()).norm() <= 1e-10);
  }
}

TEST_CASE("quadrature branch is used when eta1 < eta2 on oblique vectors") {
  std::mt19937_64 rng(9);
  const auto u = testkit::random_unit(rng, 2);
  const auto v = testkit::random_unit(rng, 2);
  const auto m = mix_two(0.3, 1.0, u, v, 0.6, 0.7);
  CHECK(m.branch == MixResult::Branch::quadrature);
  CHECK(std::norm(m.sigma) == doctest::Approx(m.z_o).epsilon(1e-14));
  CHECK(std::norm(m.sigma) + std::norm(m.tau) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("supplied differences agree with the plain overload") {
  std::mt19937_64 rng(2);
  const auto u = testkit::random_unit(rng, 3);
  const auto v = testkit::random_unit(rng, 3);
  const double tb = 1e-6, ta = 4e-7;  // tails before and after
  const auto a = mix_two(1.0 - tb, 1.0, u, v, 1.0 - ta, 1.0 - (tb - ta), -tb, -ta);
  const auto b = mix_two(1.0 - tb, 1.0, u, v, 1.0 - ta, 1.0 - (tb - ta));
  CHECK(std::abs(std::norm(a.sigma) - std::norm(b.sigma)) < 1e-8);
  // the exact bound is (1 - tb) ta / (tb (1 - ta))
  const double bound = (1.0 - tb) * ta / (tb * (1.0 - ta));
  CHECK(std::norm(a.sigma) <= bound * (1.0 + 1e-14));
}

TEST_CASE("Horn chain examples") {
  const std::vector<UnitVec> E{e(2, 0), e(2, 1)};
  {
    const std::vector<double> eta{1, 1}, xi{0.5, 0.5, 0.5, 0.5};
    const auto d = horn_decompose(eta, E, xi);
    CHECK(d.size() == 4);
    CHECK(residual_norm(HermOp::identity(2), d) < 1e-10);
  }
  {
    const std::vector<double> eta{1.5, 0.5}, xi{1, 1};
    const auto d = horn_decompose(eta, E, xi);
    CHECK(d.size() == 2);
    CHECK(residual_norm(HermOp::diagonal(eta), d) < 1e-12);
  }
  {
    const std::vector<double> eta{0.8, 0.2};
    const auto d = horn_decompose(eta, E, eta);
    CHECK((d[0].vector.coords() - E[0].coords()).norm() == 0.0);
    CHECK((d[1].vector.coords() - E[1].coords()).norm() == 0.0);
  }
  const std::vector<double> big{2, 0}, bad{1, 0.5};
  CHECK_THROWS_AS(horn_decompose(bad, E, big), Error);
}

TEST_CASE("Horn chain conserves mass step by step") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = 1 + it % 9;
    std::vector<double> eta(n);
    for (auto& x : eta) x = 2 * u01(rng);
    auto xi = testkit::doubly_stochastic_image(rng, eta);
    const auto E = testkit::random_oblique(rng, n, 4);
    std::vector<HornStep> trace;
    const auto d = horn_decompose(eta, E, xi, {1e-12}, &trace);
    for (const auto& s : trace) CHECK(std::abs(s.pool_total - s.remaining_total) <= 1e-10);
    CHECK((frame_operator(d).matrix() - testkit::frame(eta, E, 4)).norm() <= 1e-9 * static_cast<double>(n));
    auto w = d.weights();
    auto x = xi;
    x.erase(std::remove(x.begin(), x.end(), 0.0), x.end());
    CHECK(w == x);
  }
}

TEST_CASE("Schur-Horn matrix has the prescribed diagonal and spectrum") {
  auto check = [](std::vector<double> lambda, std::vector<double> xi) {
    const HermOp m = schur_horn_matrix(lambda, xi);
    REQUIRE(m.dim() == static_cast<Eigen::Index>(xi.size()));
    for (std::size_t i = 0; i < xi.size(); ++i) {
      CHECK(std::abs(m.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() - xi[i]) < 1e-12);
    }
    auto s = spectrum_desc(m);
    lambda.resize(s.size(), 0.0);
    std::sort(lambda.rbegin(), lambda.rend());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(s[i] - lambda[i]) < 1e-12);
    return m;
  };
  const HermOp a = check({1, 0}, {0.5, 0.5});
  CHECK(std::abs(a.matrix()(0, 1)) == doctest::Approx(0.5));
  const HermOp b = check({2, 1}, {2, 1});
  CHECK(std::abs(b.matrix()(0, 1)) < 1e-15);
  check({3, 1, 0}, {2, 1, 1});
}
