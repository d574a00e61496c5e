#include "adm/checkers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adm/error.hpp"
#include "adm/horn.hpp"
#include "summation.hpp"

namespace adm {

SumOfProjReport sum_of_projections_check(const HermOp& A, bool with_witness) {
  SumOfProjReport rep;
  if (A.dim() == 0) {
    rep.is_sum = true;
    rep.count = 0;
    return rep;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(A.matrix());
  require(es.info() == Eigen::Success, Reason::assertion, "eigensolver did not converge");
  const auto& vals = es.eigenvalues();
  require(vals.minCoeff() >= -kEigTol, Reason::not_psd,
          "operator has a negative eigenvalue " + std::to_string(vals.minCoeff()));

  detail::Summation ex, def, tr;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const double l = vals[i];
    if (l > 1.0) ex.add(l - 1.0);
    if (l > kEigTol && l < 1.0) def.add(1.0 - l);
    if (l > kEigTol) tr.add(l);
  }
  rep.excess = ex.value();
  rep.deficiency = def.value();
  rep.gap = rep.excess - rep.deficiency;
  auto g = as_integer(rep.gap, 1e-9);
  rep.is_sum = g.has_value() && *g >= 0;
  if (!rep.is_sum) return rep;
  auto n = as_integer(tr.value(), 1e-9);
  require(n.has_value(), Reason::assertion, "integral gap with a non-integral trace");
  rep.count = *n;

  if (with_witness && *n == 0) {
    // A = 0: the empty sum
    rep.witness = RankOneDecomp(A.dim());
    rep.witness_residual = 0.0;
  } else if (with_witness) {
    std::vector<double> lambda;
    std::vector<UnitVec> vecs;
    for (Eigen::Index i = vals.size() - 1; i >= 0; --i) {
      if (vals[i] <= kEigTol) continue;
      lambda.push_back(vals[i]);
      vecs.push_back(UnitVec::normalized(es.eigenvectors().col(i)));
    }
    std::vector<double> ones(static_cast<std::size_t>(*n), 1.0);
    require(majorizes(ones, lambda, 1e-9).holds, Reason::assertion,
            "(1, ..., 1) is not majorized by the spectrum although the gap is integral");
    RankOneDecomp w = horn_decompose(lambda, vecs, ones, HornOptions{1e-9});
    rep.witness_residual = residual_norm(A, w);
    rep.witness = std::move(w);
  }
  return rep;
}

bool trace_admissibility_check(std::span<const double> xi, const HermOp& A) {
  return std::abs(detail::sum(xi) - A.trace()) <= 1e-10;
}

double complement_total(const WeightSeq& xi) {
  using Kind = WeightSeq::Kind;
  detail::Summation s;
  for (double h : xi.head()) s.add(1.0 - h);
  switch (xi.kind()) {
    case Kind::finite: break;
    case Kind::finitely_supported:
    case Kind::geometric_tail: return INFINITY;
    case Kind::one_minus_geometric:
      if (xi.tail_first() != 0.0) {
        if (xi.tail_ratio() >= 1.0) return INFINITY;
        s.add(xi.tail_first() / (1.0 - xi.tail_ratio()));
      }
      break;
    case Kind::periodic:
      for (double c : xi.cycle()) {
        if (c < 1.0) return INFINITY;
      }
      break;
    case Kind::interleave:
      s = detail::Summation();
      for (const auto& p : xi.parts()) s.add(complement_total(p));
      break;
  }
  return s.value();
}

namespace {

bool total_matches(double total, Cardinal c) {
  if (std::isinf(total)) return c.is_infinite();
  return c.is_finite() && std::abs(total - static_cast<double>(c.value())) <= 1e-10;
}

}  // namespace

ProjDiagReport projection_diag_check(const WeightSeq& xi, Cardinal p_rank, Cardinal codim) {
  require(xi.sup() <= 1.0, Reason::out_of_range, "entries must lie in [0, 1]");
  const auto k = kadison_check(xi);
  require(k.satisfied, Reason::kadison, "sequence does not satisfy the Kadison condition");
  ProjDiagReport rep;
  rep.adm_P = total_matches(xi.total(), p_rank);
  rep.adm_complement = total_matches(complement_total(xi), codim);
  rep.unitary_orbit = rep.adm_P && rep.adm_complement;
  return rep;
}

IneqReport ineq_check(const HermOp& A, const RankOneDecomp& d) {
  require(d.empty() || d.dim() == A.dim(), Reason::dimension, "operator and decomposition dimensions differ");
  if (!d.empty()) {
    const HermOp gap = A - frame_operator(d);
    const auto s = spectrum_desc(gap);
    require(s.empty() || s.back() >= -1e-9, Reason::precondition,
            "frame operator is not dominated by A (min eigenvalue " + std::to_string(s.back()) + ")");
  }
  IneqReport rep;
  detail::Summation lhs, rhs;
  for (double l : spectrum_desc(A)) {
    if (l > 1.0) lhs.add(l - 1.0);
  }
  for (const auto& t : d.terms()) {
    if (t.weight > 1.0) rhs.add(t.weight - 1.0);
  }
  rep.lhs = lhs.value();
  rep.rhs = rhs.value();
  rep.holds = rep.lhs >= rep.rhs - 1e-9;
  return rep;
}

RankOneDecomp adm_transform(const RankOneDecomp& d1, const std::optional<RankOneDecomp>& d2,
                            const AdmTransform& mode) {
  using Mode = AdmTransform::Mode;
  if (mode.mode == Mode::split) {
    require(mode.eta.size() <= d1.size(), Reason::precondition, "split has more amounts than terms");
    RankOneDecomp out(d1.dim());
    for (std::size_t j = 0; j < d1.size(); ++j) {
      const auto& t = d1[j];
      if (j < mode.eta.size()) {
        const double e = mode.eta[j];
        require(e >= 0.0 && e <= t.weight, Reason::precondition, "split amount must lie in [0, weight]");
        out.add(e, t.vector);
        out.add(t.weight - e, t.vector);
      } else {
        out.add(t.weight, t.vector);
      }
    }
    return out;
  }

  require(d2.has_value(), Reason::precondition, "this transform needs a second decomposition");
  const Eigen::Index dim = std::max(d1.dim(), d2->dim());
  const RankOneDecomp a = d1.dim() < dim ? d1.padded(dim) : d1;
  const RankOneDecomp b = d2->dim() < dim ? d2->padded(dim) : *d2;
  double sa = 1.0, sb = 1.0;
  if (mode.mode == Mode::convex_mix) {
    require(mode.t >= 0.0 && mode.t <= 1.0, Reason::precondition, "convex weight must lie in [0, 1]");
    const double diff = (frame_operator(a).matrix() - frame_operator(b).matrix()).norm();
    require(diff <= 1e-10, Reason::precondition, "convex mix needs two decompositions of the same operator");
    sa = mode.t;
    sb = 1.0 - mode.t;
  }
  RankOneDecomp out(dim);
  for (std::size_t j = 0; j < std::max(a.size(), b.size()); ++j) {
    if (j < a.size()) out.add(sa * a[j].weight, a[j].vector);
    if (j < b.size()) out.add(sb * b[j].weight, b[j].vector);
  }
  return out;
}

}  // namespace adm
