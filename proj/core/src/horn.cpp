#include "adm/horn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "adm/error.hpp"
#include "summation.hpp"

namespace adm {

namespace {

double clamp0(double x) { return x > 0.0 ? x : 0.0; }

UnitVec combine(Complex a, const Vector& u, Complex b, const Vector& v) {
  Vector w = a * u + b * v;
  const double n = w.norm();
  require(std::abs(n - 1.0) <= 1e-9, Reason::assertion,
          "mixed vector lost unit norm (" + std::to_string(n) + ")");
  // Rounding only; renormalise so downstream unit checks hold.
  return UnitVec(w / n);
}

}  // namespace

double MixResult::ellipse_residual() const {
  const Complex sp = sigma_prime;
  const Complex tp = tau_prime * std::conj(phase);
  return std::norm(sp) + std::norm(tp) + 2.0 * gamma * (std::conj(sp) * tp).real() - 1.0;
}

MixResult mix_two(double eta1, double eta2, const UnitVec& u, const UnitVec& u_prime, double xi1, double xi2) {
  return mix_two(eta1, eta2, u, u_prime, xi1, xi2, eta1 - eta2, eta1 - xi2);
}

MixResult mix_two(double eta1, double eta2, const UnitVec& u, const UnitVec& u_prime, double xi1, double xi2, double d,
                  double e) {
  require(u.dim() == u_prime.dim(), Reason::dimension, "mix_two: vector dimensions differ");
  for (double x : {eta1, eta2, xi1, xi2}) {
    require(std::isfinite(x) && x >= 0.0, Reason::out_of_range, "mix_two: weights must be finite and nonnegative");
  }
  require(d != 0.0 && eta1 != eta2, Reason::precondition, "mix_two: eta1 must differ from eta2");
  require(xi1 > 0.0, Reason::precondition, "mix_two: xi1 must be positive");

  const double scale = std::max(1.0, eta1 + eta2);
  const double eps = 1e-12 * scale;
  const double lo = std::min(eta1, eta2);
  const double hi = std::max(eta1, eta2);
  require(std::abs(xi1 + xi2 - eta1 - eta2) <= eps, Reason::majorization,
          "mix_two: xi1 + xi2 differs from eta1 + eta2");
  require(xi1 >= lo - eps && xi1 <= hi + eps && xi2 >= lo - eps && xi2 <= hi + eps, Reason::majorization,
          "mix_two: (xi1, xi2) is not majorized by (eta1, eta2)");
  require(std::abs(d - (eta1 - eta2)) <= eps && std::abs(e - (eta1 - xi2)) <= eps, Reason::precondition,
          "mix_two: supplied differences disagree with the weights");

  const Vector& uc = u.coords();
  const Complex gc = inner(uc, u_prime.coords());
  const double gamma = std::abs(gc);
  const Complex phase = gamma > 0.0 ? gc / gamma : Complex(1.0, 0.0);
  const Vector ur = phase * u_prime.coords();

  auto finish = [&](MixResult::Branch br, double s, Complex t, double sp, Complex tp) {
    MixResult r{combine(s, uc, t, ur), combine(sp, uc, tp, ur)};
    r.sigma = s;
    r.tau = t * phase;
    r.sigma_prime = sp;
    r.tau_prime = tp * phase;
    r.gamma = gamma;
    r.phase = phase;
    r.branch = br;
    return r;
  };

  const double tiny = 1e-15 * scale;

  if (eta2 == 0.0) {
    // Everything sits on u; xi1 + xi2 = eta1 forces both onto u.
    MixResult r = finish(MixResult::Branch::rank_one, 1.0, 0.0, 1.0, 0.0);
    r.z_o = 1.0;
    r.z_minus = 1.0;
    return r;
  }
  if (eta1 == 0.0) {
    MixResult r = finish(MixResult::Branch::rank_one, 0.0, 1.0, 0.0, 1.0);
    return r;
  }
  // xi1 - eta1 = e - d
  if (std::abs(e - d) <= tiny) {
    MixResult r = finish(MixResult::Branch::identity, 1.0, 0.0, 0.0, 1.0);
    r.z_o = 1.0;
    r.z_minus = 1.0;
    return r;
  }
  if (std::abs(e) <= tiny) {
    return finish(MixResult::Branch::swap, 0.0, 1.0, 1.0, 0.0);
  }
  if ((uc - ur).norm() <= 1e-14) {
    // u and u' span a line; any split keeps the same vector.
    return finish(MixResult::Branch::parallel, 0.0, 1.0, 0.0, 1.0);
  }

  // e / d lies in (0, 1); (d - e) / d = 1 - e / d is formed without
  // cancellation since d - e = xi2 - eta2 has the sign of d.
  const double ed = e / d;
  const double rest = (d - e) / d;
  const double z_o = clamp0(eta1 * ed / xi1);
  const double h = 4.0 * eta1 * eta2 * gamma * gamma / (d * d);
  const double alpha = 1.0 / ed;
  const double disc = clamp0(4.0 * (alpha - 1.0) * h + alpha * alpha * h * h);
  const double root = alpha * h + std::sqrt(disc);
  const double z_minus = 2.0 * z_o / (2.0 + root);

  // 1 - |sigma|^2 - |tau|^2 = (d / eta1)(z_o - |sigma|^2). For eta1 > eta2
  // the smaller root keeps this nonnegative and real coefficients work.
  // For eta1 < eta2 it forces |sigma|^2 = z_o, and tau is put in quadrature
  // with sigma so the cross term 2 gamma Re(sigma* tau) vanishes.
  const bool quadrature = d < 0.0 && gamma > 0.0;
  const double z = quadrature ? z_o : z_minus;
  const double gap = quadrature ? 0.0 : z_o * root / (2.0 + root);  // z_o - z
  const double sigma = std::sqrt(z);
  // tau^2 = (eta2 / eta1)(eta1 / xi1 - z)
  const double tau_abs = std::sqrt(clamp0((eta2 / eta1) * (eta1 * rest / xi1 + gap)));
  const Complex tau = quadrature ? Complex(0.0, tau_abs) : Complex(tau_abs, 0.0);
  double sp = 0.0;
  Complex tp = 0.0;
  if (xi2 > 0.0) {
    // sigma'^2 = (eta1 - xi1 z) / xi2, tau'^2 = (eta2 - xi1 tau^2) / xi2
    sp = std::sqrt(clamp0((eta1 * rest + xi1 * gap) / xi2));
    const double tp_abs = std::sqrt(clamp0(eta2 * xi1 * z / (eta1 * xi2)));
    // xi1 sigma conj(tau) + xi2 sigma' conj(tau') = 0 fixes the phase of tau'.
    tp = tau_abs > 0.0 ? -tp_abs * (tau / tau_abs) : Complex(-tp_abs, 0.0);
  } else {
    // xi2 = 0: w' carries no weight; any unit vector will do.
    sp = 1.0;
  }
  MixResult r = finish(quadrature ? MixResult::Branch::quadrature : MixResult::Branch::general, sigma, tau, sp, tp);
  r.z_o = z_o;
  r.h = h;
  r.alpha_coef = alpha;
  r.z_minus = z_minus;
  return r;
}

RankOneDecomp horn_decompose(std::span<const double> eta, std::span<const UnitVec> e, std::span<const double> xi,
                             const HornOptions& opts, std::vector<HornStep>* trace) {
  require(eta.size() == e.size(), Reason::dimension, "horn_decompose: need one vector per eta entry");
  require(!e.empty(), Reason::precondition, "horn_decompose: eta is empty");
  const Eigen::Index dim = e[0].dim();
  for (const auto& v : e) require(v.dim() == dim, Reason::dimension, "horn_decompose: vector dimensions differ");
  for (double x : eta) require(std::isfinite(x) && x >= 0.0, Reason::out_of_range, "horn_decompose: bad eta");
  for (double x : xi) require(std::isfinite(x) && x >= 0.0, Reason::out_of_range, "horn_decompose: bad xi");

  auto mv = majorizes(xi, eta, opts.tol);
  if (!mv.holds) {
    fail(Reason::majorization, "horn_decompose: xi is not majorized by eta" +
                                   (mv.failing_index ? " (first failure at k = " +
                                                           std::to_string(*mv.failing_index) + ")"
                                                     : std::string()));
  }

  struct Slot {
    double w;
    Vector v;
  };
  std::vector<Slot> pool;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (eta[i] > 0.0) pool.push_back({eta[i], e[i].coords()});
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (xi[i] > 0.0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xi[a] > xi[b]; });

  const double scale = std::max({1.0, detail::sum(eta), detail::sum(xi)});
  const double eps = opts.tol * scale;
  double remaining = 0.0;
  for (auto i : order) remaining += xi[i];

  std::vector<std::optional<UnitVec>> placed(xi.size());
  std::optional<UnitVec> last;
  for (auto idx : order) {
    const double t = xi[idx];
    remaining -= t;
    std::optional<std::size_t> match, above, below;
    for (std::size_t j = 0; j < pool.size(); ++j) {
      const double w = pool[j].w;
      if (std::abs(w - t) <= eps) {
        if (!match) match = j;
      } else if (w > t) {
        if (!above || w < pool[*above].w) above = j;
      } else {
        if (!below || w > pool[*below].w) below = j;
      }
    }
    HornStep step{t, 0.0, 0.0, 0.0, 0.0};
    if (match) {
      step.a = pool[*match].w;
      placed[idx] = UnitVec(pool[*match].v);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(*match));
    } else if (above && below) {
      const double a = pool[*above].w;
      const double b = pool[*below].w;
      step.a = a;
      step.b = b;
      MixResult m = mix_two(a, b, UnitVec(pool[*above].v), UnitVec(pool[*below].v), t, a + b - t);
      placed[idx] = m.w;
      const double rest = a + b - t;
      const auto hi = std::max(*above, *below);
      const auto lo = std::min(*above, *below);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(hi));
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(lo));
      // Keep even sub-tolerance leftovers: geometric targets can be smaller still.
      if (rest > 0.0) pool.push_back({rest, m.w_prime.coords()});
    } else if (above) {
      step.a = pool[*above].w;
      placed[idx] = UnitVec(pool[*above].v);
      pool[*above].w -= t;
    } else if (t <= eps && last) {
      // Only rounding dust is owed; any unit vector carries it.
      placed[idx] = *last;
    } else {
      fail(Reason::assertion, "horn_decompose: pool exhausted before all targets were placed");
    }
    last = placed[idx];
    if (trace) {
      double p = 0.0;
      for (const auto& s : pool) p += s.w;
      step.pool_total = p;
      step.remaining_total = remaining;
      trace->push_back(step);
    }
  }

  double left = 0.0;
  for (const auto& s : pool) left += s.w;
  require(left <= eps * static_cast<double>(eta.size() + 1), Reason::assertion,
          "horn_decompose: unplaced mass " + std::to_string(left));

  RankOneDecomp out(dim);
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (placed[i]) out.add(xi[i], *placed[i]);
  }
  return out;
}

HermOp schur_horn_matrix(std::span<const double> lambda, std::span<const double> xi) {
  const std::size_t n = std::max(lambda.size(), xi.size());
  require(n > 0, Reason::precondition, "schur_horn_matrix: empty input");
  for (double x : lambda) require(x >= 0.0, Reason::out_of_range, "schur_horn_matrix: lambda must be nonnegative");
  const auto dim = static_cast<Eigen::Index>(n);
  std::vector<UnitVec> basis;
  basis.reserve(lambda.size());
  for (std::size_t k = 0; k < lambda.size(); ++k) basis.push_back(UnitVec::basis(dim, static_cast<Eigen::Index>(k)));
  RankOneDecomp d = horn_decompose(lambda, basis, xi);

  // Rows of B are sqrt(xi_j) P_j*; the Gram matrix B B* has the given diagonal.
  Matrix b = Matrix::Zero(dim, dim);
  std::size_t next = 0;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    if (xi[j] > 0.0) {
      b.row(static_cast<Eigen::Index>(j)) = std::sqrt(xi[j]) * d[next++].vector.coords().adjoint();
    }
  }
  Matrix g = b * b.adjoint();
  return HermOp(0.5 * (g + g.adjoint()));
}

}  // namespace adm
