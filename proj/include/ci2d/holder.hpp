#ifndef CI2D_HOLDER_HPP
#define CI2D_HOLDER_HPP

#include <functional>
#include <vector>

#include "ci2d/field.hpp"

namespace ci2d {

/// Decorrelation report for | ||a f(sigma.)||_Lp - ||a||_Lp ||f||_Lp | on the
/// window [m/sigma, n/sigma]; `bound` is sigma^{-1/p} ((n-m)/sigma)^{d/p}
/// ||a||_{C^{0,1}} ||f||_Lp without the universal constant.
struct HolderGapReport {
  Real lhs_gap = 0;
  Real bound = 0;
  Real implied_constant = 0;
};

/// 1D version. `a` is evaluated on a dense quadrature grid inside the window;
/// `f_period` holds samples of one period of f on a uniform grid.
HolderGapReport improved_holder_check(const std::function<Real(Real)>& a,
                                      const std::vector<Real>& f_period, Real p,
                                      int sigma, int m, int n);

/// 2D version on the full torus window [0,1]^2 (m = 0, n = sigma).
HolderGapReport improved_holder_check(const ScalarField& a, const ScalarField& f,
                                      Real p, int sigma);

/// Mean-zero special case: |int a f(sigma t) dt| over the window against
/// (n-m) sigma^{-2} ||a||_{C^{0,1}} ||f||_{L1}.
HolderGapReport improved_holder_meanzero(const std::function<Real(Real)>& a,
                                         const std::vector<Real>& f_period,
                                         int sigma, int m, int n);

/// Log-log slope of gap vs sigma, fitted by least squares.
Real fitted_slope(const std::vector<Real>& sigmas, const std::vector<Real>& gaps);

}  // namespace ci2d

#endif  // CI2D_HOLDER_HPP
