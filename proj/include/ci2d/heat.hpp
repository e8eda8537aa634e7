#ifndef CI2D_HEAT_HPP
#define CI2D_HEAT_HPP

#include "ci2d/calculus.hpp"
#include "ci2d/dyadic.hpp"

namespace ci2d {

/// Heat semigroup P_t: mode k scaled by e^{-4 pi^2 |k|^2 t}, t >= 0.
ScalarField heat_semigroup(const ScalarField& f, Real t);
VectorField heat_semigroup(const VectorField& v, Real t);
SymTensorField heat_semigroup(const SymTensorField& s, Real t);

/// Duhamel integral I f(t) = int_0^t P_{t-s} f(s) ds with piecewise-constant
/// forcing per step and the linear part integrated exactly (per-mode ETD).
/// f.values[i] is the forcing on [t_i, t_{i+1}); t must lie on the grid.
ScalarField duhamel(const ScalarSeries& f, Real t);
VectorField duhamel(const VectorSeries& f, Real t);

struct SchauderReport {
  std::vector<Real> times;
  std::vector<Real> ratios;  // t^{theta/2} ||P_t f||_{B^{theta+alpha}} / ||f||_{B^alpha}
  Real sup_ratio = 0;
  Real sup_lower_decade = 0;  // smallest-t decade of the sweep
  Real sup_upper_decade = 0;
};

/// Smoothing-rate monitor for Lemma-type heat bounds.
SchauderReport schauder_monitor(const ScalarField& f, Real theta, Real alpha,
                                Real p, Real q, const std::vector<Real>& t_sweep);

/// One application of w -> -I[P_H div((v1+z) (x) w + w (x) (v2+z))] to
/// w = v1 - v2; returns ||Phi w|| / ||w|| in L^2_t H^zeta on [0, t_star].
/// Returns 0 when w vanishes identically.
Real contraction_factor(const VectorSeries& v1, const VectorSeries& v2,
                        const VectorSeries& z, Real t_star, Real zeta, Real kappa);

}  // namespace ci2d

#endif  // CI2D_HEAT_HPP
