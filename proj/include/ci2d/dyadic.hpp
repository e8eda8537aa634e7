#ifndef CI2D_DYADIC_HPP
#define CI2D_DYADIC_HPP

#include "ci2d/calculus.hpp"
#include "ci2d/field.hpp"

namespace ci2d {

/// Dyadic Littlewood-Paley partition built from a smooth radial cutoff:
/// chi = 1 on |k| <= 3/4, 0 on |k| >= 4/3, and phi_j(k) = chi(|k|/2^{j+1}) -
/// chi(|k|/2^j) supported in the annulus 3/4*2^j <= |k| <= 8/3*2^j. Block -1
/// is the low ball. The partition telescopes, so it sums to 1 exactly per
/// retained mode.
struct DyadicPartition {
  /// Smooth cutoff profile, 1 for r <= 3/4, 0 for r >= 4/3.
  static Real chi_profile(Real r);
  /// Annulus profile of block j >= 0 evaluated at |k| = r.
  static Real phi_profile(Real r, int j);
  /// Weight of block j (j >= -1) at radius r.
  static Real block_weight(Real r, int j);
  /// Largest block index with support intersecting |k| <= N/2.
  static int max_block(const Grid& g);
};

struct BesovIndex {
  Real alpha = 0;
  Real p = 2;
  Real q = 2;
  BesovIndex(Real a, Real pp, Real qq) : alpha(a), p(pp), q(qq) {
    if (pp < 1 || qq < 1) throw std::invalid_argument("Besov indices need p,q >= 1");
  }
};

/// Littlewood-Paley block Delta_j f, j >= -1.
ScalarField lp_block(const ScalarField& f, int j);
VectorField lp_block(const VectorField& f, int j);
SymTensorField lp_block(const SymTensorField& f, int j);

/// Localizers Delta_{<=J} and Delta_{>J}; they sum to the identity exactly.
enum class LocalizeSide { kAtMost, kAbove };
ScalarField localize(const ScalarField& f, int J, LocalizeSide side);
VectorField localize(const VectorField& f, int J, LocalizeSide side);

/// Report for the localizer tail bound (deltaf): measured ||Delta_{>J}f||_{C^alpha}
/// against 2^{-J(beta-alpha)} ||f||_{C^beta}.
struct LocalizerBoundReport {
  Real tail_norm = 0;
  Real reference = 0;
  Real implied_constant = 0;
};
LocalizerBoundReport localizer_bound_report(const ScalarField& f, int J,
                                            Real alpha, Real beta);

/// Besov norm (sum_j 2^{j alpha q} ||Delta_j f||_{L^p}^q)^{1/q}, sup for
/// q = inf; block -1 carries weight 2^{-alpha}.
Real besov_norm(const ScalarField& f, const BesovIndex& idx);
/// Vector fields: max over components.
Real besov_norm(const VectorField& f, const BesovIndex& idx);
Real besov_norm(const SymTensorField& f, const BesovIndex& idx);

/// C^alpha = B^alpha_{inf,inf}.
inline Real holder_norm(const ScalarField& f, Real alpha) {
  return besov_norm(f, BesovIndex(alpha, std::numeric_limits<Real>::infinity(),
                                  std::numeric_limits<Real>::infinity()));
}
inline Real holder_norm(const VectorField& f, Real alpha) {
  return besov_norm(f, BesovIndex(alpha, std::numeric_limits<Real>::infinity(),
                                  std::numeric_limits<Real>::infinity()));
}
inline Real holder_norm(const SymTensorField& f, Real alpha) {
  return besov_norm(f, BesovIndex(alpha, std::numeric_limits<Real>::infinity(),
                                  std::numeric_limits<Real>::infinity()));
}

}  // namespace ci2d

#endif  // CI2D_DYADIC_HPP
