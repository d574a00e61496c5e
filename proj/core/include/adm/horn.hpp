#pragma once

#include <span>
#include <vector>

#include "adm/operators.hpp"

namespace adm {

/// Output of the 2x2 mixing step. The coefficients are relative to the
/// caller's u and u':
///   w  = sigma  u + tau  u'
///   w' = sigma' u + tau' u'
/// and xi1 w (x) w + xi2 w' (x) w' = eta1 u (x) u + eta2 u' (x) u'.
///
/// Internally u' is first rotated by `phase` so that (u, phase u') = gamma
/// is real and nonnegative; sigma and sigma' are then real and tau, tau'
/// carry the phase. In the quadrature branch (eta1 < eta2, gamma > 0) tau
/// is additionally rotated by i relative to sigma.
struct MixResult {
  enum class Branch { general, quadrature, identity, swap, parallel, rank_one };

  UnitVec w;
  UnitVec w_prime;
  Complex sigma{};
  Complex tau{};
  Complex sigma_prime{};
  Complex tau_prime{};
  double z_minus = 0.0;
  double z_o = 0.0;
  double h = 0.0;
  double alpha_coef = 0.0;
  double gamma = 0.0;
  Complex phase{1.0, 0.0};
  Branch branch = Branch::general;

  /// |sigma'|^2 + |tau'|^2 + 2 gamma Re(conj(sigma') tau') - 1 in the
  /// rotated frame.
  double ellipse_residual() const;
};

/// Re-splits eta1 u(x)u + eta2 u'(x)u' as xi1 w(x)w + xi2 w'(x)w'.
/// Requires eta1 != eta2, (xi1, xi2) < (eta1, eta2) and xi1 > 0.
///
/// The smaller root of (1+h) z^2 - (2 + alpha h) z_o z + z_o^2 = 0 gives
/// sigma^2; it is evaluated in the cancellation-free form
///   z_- = 2 z_o / (2 + alpha h + sqrt(4 (alpha - 1) h + alpha^2 h^2)).
/// When eta1 < eta2 and gamma > 0 no real root satisfies both the norm
/// bound and the sigma bound; |sigma|^2 = z_o is used with tau in quadrature.
MixResult mix_two(double eta1, double eta2, const UnitVec& u, const UnitVec& u_prime, double xi1, double xi2);
/// Same, with d = eta1 - eta2 and e = eta1 - xi2 supplied by a caller that
/// knows them more accurately than the subtraction would give.
MixResult mix_two(double eta1, double eta2, const UnitVec& u, const UnitVec& u_prime, double xi1, double xi2, double d,
                  double e);

struct HornOptions {
  double tol = kSumTol;
};

/// One step of the Horn chain, recorded for conservation checks.
struct HornStep {
  double target = 0.0;
  double a = 0.0;  ///< pool weight >= target (0 if peeled from b)
  double b = 0.0;  ///< pool weight < target (0 if split or peeled)
  double pool_total = 0.0;       ///< pool mass after the step
  double remaining_total = 0.0;  ///< target mass still to place after the step
};

/// Given xi < eta and unit vectors E_j (one per eta_j), returns unit vectors
/// P_j with sum xi_j P_j (x) P_j = sum eta_j E_j (x) E_j. Terms come out in
/// the order of xi with zero weights dropped, weights copied exactly.
///
/// Targets are placed largest first. Each target t is matched against the
/// pool (initially eta): an equal pool weight is peeled off directly;
/// otherwise the smallest pool weight a >= t and the largest b < t are mixed
/// with mix_two into (t, a + b - t) and the leftover returns to the pool.
/// When no pool weight is below t the smallest a > t is split into t and
/// a - t on the same vector.
RankOneDecomp horn_decompose(std::span<const double> eta, std::span<const UnitVec> e, std::span<const double> xi,
                             const HornOptions& opts = {}, std::vector<HornStep>* trace = nullptr);

/// Hermitian matrix with spectrum lambda (padded with zeros) and diagonal xi:
/// the Gram matrix of horn_decompose(lambda, standard basis, xi).
HermOp schur_horn_matrix(std::span<const double> lambda, std::span<const double> xi);

}  // namespace adm
