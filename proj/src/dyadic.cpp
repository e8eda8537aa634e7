#include "ci2d/dyadic.hpp"

#include <cmath>
#include <limits>

namespace ci2d {

namespace {

// C^inf step: 0 at u <= 0, 1 at u >= 1.
Real smooth_step(Real u) {
  if (u <= 0) return 0;
  if (u >= 1) return 1;
  Real a = std::exp(-1.0 / u);
  Real b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

}  // namespace

Real DyadicPartition::chi_profile(Real r) {
  return 1.0 - smooth_step((r - 0.75) / (4.0 / 3.0 - 0.75));
}

Real DyadicPartition::phi_profile(Real r, int j) {
  Real s = std::ldexp(1.0, -j);  // 2^{-j}
  return chi_profile(r * s * 0.5) - chi_profile(r * s);
}

Real DyadicPartition::block_weight(Real r, int j) {
  if (j < -1) return 0;
  if (j == -1) return chi_profile(r);
  return phi_profile(r, j);
}

int DyadicPartition::max_block(const Grid& g) {
  Real rmax = g.nyquist() * std::sqrt(2.0);
  int j = 0;
  while (0.75 * std::ldexp(1.0, j) <= rmax) ++j;
  return j;
}

namespace {

void block_multiplier_inplace(const Grid& g, ArrayXXc& coef, int j) {
  for (int a = 0; a < g.n; ++a) {
    Real k1 = g.mode(a);
    for (int b = 0; b < g.n; ++b) {
      Real k2 = g.mode(b);
      coef(a, b) *= DyadicPartition::block_weight(std::hypot(k1, k2), j);
    }
  }
}

void localize_multiplier_inplace(const Grid& g, ArrayXXc& coef, int J,
                                 LocalizeSide side) {
  // Delta_{<=J} = chi(|k|/2^{J+1}) by telescoping; Delta_{>J} = 1 - that.
  for (int a = 0; a < g.n; ++a) {
    Real k1 = g.mode(a);
    for (int b = 0; b < g.n; ++b) {
      Real k2 = g.mode(b);
      Real low = (J < -1) ? 0.0
                          : DyadicPartition::chi_profile(
                                std::hypot(k1, k2) * std::ldexp(1.0, -(J + 1)));
      coef(a, b) *= (side == LocalizeSide::kAtMost) ? low : (1.0 - low);
    }
  }
}

}  // namespace

ScalarField lp_block(const ScalarField& f, int j) {
  ScalarField out = f;
  block_multiplier_inplace(f.grid, out.coef, j);
  return out;
}

VectorField lp_block(const VectorField& f, int j) {
  VectorField out = f;
  block_multiplier_inplace(f.grid, out.comp[0], j);
  block_multiplier_inplace(f.grid, out.comp[1], j);
  return out;
}

SymTensorField lp_block(const SymTensorField& f, int j) {
  SymTensorField out = f;
  for (auto& c : out.comp) block_multiplier_inplace(f.grid, c, j);
  return out;
}

ScalarField localize(const ScalarField& f, int J, LocalizeSide side) {
  ScalarField out = f;
  localize_multiplier_inplace(f.grid, out.coef, J, side);
  return out;
}

VectorField localize(const VectorField& f, int J, LocalizeSide side) {
  VectorField out = f;
  localize_multiplier_inplace(f.grid, out.comp[0], J, side);
  localize_multiplier_inplace(f.grid, out.comp[1], J, side);
  return out;
}

LocalizerBoundReport localizer_bound_report(const ScalarField& f, int J,
                                            Real alpha, Real beta) {
  LocalizerBoundReport r;
  r.tail_norm = holder_norm(localize(f, J, LocalizeSide::kAbove), alpha);
  Real fn = holder_norm(f, beta);
  r.reference = std::pow(2.0, -J * (beta - alpha)) * fn;
  r.implied_constant = r.reference > 0 ? r.tail_norm / r.reference : 0.0;
  return r;
}

namespace {

template <class F>
Real besov_norm_impl(const F& f, const BesovIndex& idx,
                     const std::function<Real(const F&, Real)>& lp) {
  int jmax = DyadicPartition::max_block(f.grid);
  bool qinf = std::isinf(idx.q);
  Real acc = 0;
  for (int j = -1; j <= jmax; ++j) {
    Real nj = lp(lp_block(f, j), idx.p);
    Real w = std::pow(2.0, j * idx.alpha);
    if (qinf)
      acc = std::max(acc, w * nj);
    else
      acc += std::pow(w * nj, idx.q);
  }
  return qinf ? acc : std::pow(acc, 1.0 / idx.q);
}

}  // namespace

Real besov_norm(const ScalarField& f, const BesovIndex& idx) {
  return besov_norm_impl<ScalarField>(
      f, idx, [](const ScalarField& g, Real p) { return norm_lp(g, p); });
}

Real besov_norm(const VectorField& f, const BesovIndex& idx) {
  return std::max(besov_norm(f.component(0), idx), besov_norm(f.component(1), idx));
}

Real besov_norm(const SymTensorField& f, const BesovIndex& idx) {
  Real m = 0;
  for (int i = 0; i < 3; ++i) m = std::max(m, besov_norm(f.component(i), idx));
  return m;
}

}  // namespace ci2d
