#include <doctest.h>

#include <cmath>
#include <functional>

#include "adm/carpenter.hpp"
#include "adm/error.hpp"
#include "adm/stream.hpp"
#include "origin_oracle.hpp"
#include "testkit.hpp"

using namespace adm;

namespace {

UnitVec e(Eigen::Index dim, Eigen::Index k) { return UnitVec::basis(dim, k); }

WeightSeq geometric(double first, double ratio) { return WeightSeq::geometric_tail({}, first, ratio); }

Reason reason_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& err) {
    return err.reason();
  }
  return Reason::assertion;
}

// Every certificate below tolerance, frame operator of the prefix at the
// last certificate's distance from the reported target.
void check_result(const CarpenterResult& r, const SplitSeq& s, std::size_t stages) {
  CHECK(r.certificates.size() >= stages);
  for (const auto& c : r.certificates) CHECK(c.residual <= 1e-8);
  CHECK(std::abs(residual_norm(r.target, r.decomp) - r.certificates.back().residual) < 1e-12);
  const auto a = testkit::audit_origins(s, r.decomp, r.origins);
  CHECK(a.max_weight_error <= 1e-15);
  CHECK(a.prefixes);
  CHECK_FALSE(a.duplicates);
}

}  // namespace

TEST_CASE("strip01 examples") {
  auto a = strip01(WeightSeq::finite({0, 1, 0.5}));
  CHECK(a.mu.values() == std::vector<double>{0.5});
  CHECK(a.zeros == Cardinal(1));
  CHECK(a.ones == Cardinal(1));
  auto b = strip01(WeightSeq::periodic({}, {1.0}));
  CHECK(b.mu.empty());
  CHECK(b.lambda.empty());
  CHECK(b.ones.is_infinite());
  auto c = strip01(WeightSeq::finite({0.3, 0.7}));
  CHECK(c.zeros == Cardinal(0));
  CHECK(c.ones == Cardinal(0));
  CHECK(c.mu.values() == std::vector<double>{0.3});
}

TEST_CASE("case classification") {
  CHECK(classify_case(WeightSeq::periodic({}, {0.5})).kind == CaseKind::mu_diverges);
  CHECK(classify_case(WeightSeq::periodic({}, {0.75})).kind == CaseKind::lambda_diverges);
  CHECK(classify_case(WeightSeq::finite({0.5, 0.5})).kind == CaseKind::finite_rank);

  // lambda_j = 0.4 * 0.6^j sums to 1, no mu
  const auto mf = classify_case(WeightSeq::one_minus_geometric({}, 0.4, 0.6));
  CHECK(mf.kind == CaseKind::m_finite_n_inf);
  CHECK(mf.M == Cardinal(0));
  REQUIRE(mf.k);
  CHECK(*mf.k == 1);

  const auto both = classify_case(
      WeightSeq::interleave({geometric(0.25, 0.5), WeightSeq::one_minus_geometric({}, 0.25, 0.5)}));
  CHECK(both.kind == CaseKind::both_summable);
  CHECK(*both.k == 0);

  // sum lambda = 1/2 with no mu has a non-integral gap.
  CHECK(reason_of([] { classify_case(WeightSeq::one_minus_geometric({}, 0.25, 0.5)); }) == Reason::kadison);
  CHECK(reason_of([] {
          classify_case(WeightSeq::interleave({geometric(0.25, 0.5), WeightSeq::one_minus_geometric({}, 0.5, 0.5)}));
        }) == Reason::kadison);
  CHECK(case_name(CaseKind::both_summable) == "BOTH_SUMMABLE_MN_INF");
}

TEST_CASE("finite rank decompositions") {
  const std::vector<UnitVec> E2{e(2, 0), e(2, 1)};
  {
    const auto r = decompose_finite_rank(WeightSeq::finite({0.5, 0.5, 0.5, 0.5}), E2);
    CHECK(r.decomp.size() == 4);
    CHECK(r.residual < 1e-10);
    CHECK(residual_norm(HermOp::identity(2), r.decomp) < 1e-10);
  }
  {
    const auto r = decompose_finite_rank(WeightSeq::finite({1, 1}), E2);
    CHECK(residual_norm(HermOp::identity(2), r.decomp) < 1e-14);
  }
  {
    const std::vector<UnitVec> E1{e(1, 0)};
    const auto r = decompose_finite_rank(WeightSeq::finite({0.5, 0.5}), E1);
    REQUIRE(r.decomp.size() == 2);
    CHECK(r.decomp[0].weight == 0.5);
    CHECK(residual_norm(HermOp::identity(1), r.decomp) < 1e-14);
  }
  {
    // infinite tail: 0.75^(k+1) sums to 3
    const std::vector<UnitVec> E3{e(3, 0), e(3, 1), e(3, 2)};
    const auto r = decompose_finite_rank(geometric(0.75, 0.75), E3, 200);
    CHECK(r.pending < 1e-20);
    CHECK(residual_norm(HermOp::identity(3), r.decomp) < 1e-10);
  }
}

TEST_CASE("lambda planner bins the head of mu") {
  SplitSeq s{WeightSeq::finite({0.3, 0.3}), WeightSeq::periodic({}, {0.25}), 0, 0};
  const auto p = plan_lambda_diverges(s, 3);
  REQUIRE(p.bins.size() >= 1);
  CHECK(p.bins[0].size() == 2);
  CHECK(p.s[0] == doctest::Approx(0.4));
  CHECK(p.plans.size() == 3);
}

TEST_CASE("both-summable planner first block") {
  // mu_j = lambda_j = 2^-(j+2), k = 0
  SplitSeq s{geometric(0.25, 0.5), geometric(0.25, 0.5), 0, 0};
  const auto plans = plan_both_summable(s, 4);
  REQUIRE(plans.size() == 4);
  CHECK(std::abs(plans[0].r_out) < 1e-12);
  for (const auto& p : plans) {
    if (p.elem_check) CHECK(*p.elem_check);
  }
}

TEST_CASE("M finite head") {
  // mu = (0.5, 0.5), sum lambda = 1: k = 0
  SplitSeq s{WeightSeq::finite({0.5, 0.5}), WeightSeq::geometric_tail({}, 0.4, 0.6), 0, 0};
  const auto p = plan_m_finite(s);
  CHECK(p.k == 0);
  CHECK(p.r < 1.0);
  CHECK(p.r == doctest::Approx(s.lambda.tail_sum(p.n)));
  CHECK(p.head.eta.back() == doctest::Approx(p.r));
  double w = 0.0, eta = 0.0;
  for (double x : p.head.weights) w += x;
  for (double x : p.head.eta) eta += x;
  CHECK(w == doctest::Approx(eta));

  SplitSeq bad{WeightSeq::finite({0.5}), WeightSeq::geometric_tail({}, 0.4, 0.6), 0, 0};
  CHECK(reason_of([&] { plan_m_finite(bad); }) == Reason::kadison);
}

TEST_CASE("carpenter entry point: examples and refusals") {
  const auto basis = ProjectionStream::orthonormal_basis();
  {
    Vector a(2), b(2);
    a << 1, 0;
    b << 0, 1;
    const auto r = carpenter_decompose(WeightSeq::finite({0.5, 0.5, 0.5, 0.5}), ProjectionStream::explicit_vectors({a, b}));
    CHECK(r.tag.kind == CaseKind::finite_rank);
    CHECK(r.decomp.size() == 4);
    CHECK(residual_norm(HermOp::identity(2), r.decomp) < 1e-9);
  }
  {
    const auto xi = WeightSeq::periodic({}, {0.5});
    const auto r = carpenter_decompose(xi, basis);
    CHECK(r.tag.kind == CaseKind::mu_diverges);
    CHECK(r.certificates.size() == 10);
    check_result(r, strip01(xi), 10);
  }
  CHECK(reason_of([&] { carpenter_decompose(WeightSeq::periodic({0.3}, {1.0}), basis); }) == Reason::kadison);
  CHECK(reason_of([&] {
          carpenter_decompose(WeightSeq::finite({0.5, 0.5, 0.5, 0.5}), basis.truncated(3));
        }) == Reason::trace_mismatch);
  CHECK(reason_of([&] { carpenter_decompose(WeightSeq::periodic({}, {0.5}), basis.truncated(3)); }) ==
        Reason::trace_mismatch);
}

TEST_CASE("all five cases certify on both stream kinds") {
  const auto basis = ProjectionStream::orthonormal_basis();
  const auto block = ProjectionStream::block_overlap(3, 0);
  CarpenterOptions opts;
  opts.stages = 12;
  for (const auto* stream : {&basis, &block}) {
    {
      const auto xi = geometric(0.75, 0.75);
      const auto r = carpenter_decompose(xi, stream->truncated(3), opts);
      CHECK(r.tag.kind == CaseKind::finite_rank);
      check_result(r, strip01(xi), opts.stages);
    }
    {
      const auto xi = WeightSeq::interleave({WeightSeq::periodic({}, {0.4}), WeightSeq::periodic({}, {0.9})});
      const auto r = carpenter_decompose(xi, *stream, opts);
      CHECK(r.tag.kind == CaseKind::mu_diverges);
      check_result(r, strip01(xi), opts.stages);
    }
    {
      SplitSeq s{WeightSeq::finite({0.6, 0.5}), WeightSeq::periodic({}, {0.25}), 0, 0};
      const auto r = realize_split(s, CaseKind::lambda_diverges, *stream, opts);
      check_result(r, s, opts.stages);
    }
    {
      const auto xi = WeightSeq::interleave({geometric(0.25, 0.5), WeightSeq::one_minus_geometric({}, 0.25, 0.5)});
      const auto r = carpenter_decompose(xi, *stream, opts);
      CHECK(r.tag.kind == CaseKind::both_summable);
      check_result(r, strip01(xi), opts.stages);
    }
    {
      const auto xi = WeightSeq::one_minus_geometric({}, 0.4, 0.6);
      const auto r = carpenter_decompose(xi, *stream, opts);
      CHECK(r.tag.kind == CaseKind::m_finite_n_inf);
      check_result(r, strip01(xi), opts.stages);
    }
  }
}

TEST_CASE("zeros and ones ride along") {
  const auto basis = ProjectionStream::orthonormal_basis();
  // 0.5 forever interleaved with ones forever and a few zeros
  const auto xi = WeightSeq::interleave({WeightSeq::periodic({0, 0}, {0.5}), WeightSeq::periodic({}, {1.0})});
  const auto r = carpenter_decompose(xi, basis);
  check_result(r, strip01(xi), 10);
  const auto a = testkit::audit_origins(strip01(xi), r.decomp, r.origins);
  CHECK(a.used.at(TermOrigin::Part::zero) == 2);
  CHECK(a.used.at(TermOrigin::Part::one) >= 1);
}
