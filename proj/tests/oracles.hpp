#ifndef CI2D_TESTS_ORACLES_HPP
#define CI2D_TESTS_ORACLES_HPP

// Independent brute-force oracles used to freeze expected values. These stay
// off the library's transform path: direct O(N^4) summation only.

#include "ci2d/field.hpp"

namespace ci2d::oracle {

/// Direct DFT: c(k) = (1/N^2) sum_x f(x) e^{-2 pi i k.x}.
inline ArrayXXc dft_direct(const ArrayXXr& samples) {
  const int n = static_cast<int>(samples.rows());
  ArrayXXc out(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Complex acc(0, 0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Real ang = -kTwoPi * (static_cast<Real>(a) * i + static_cast<Real>(b) * j) / n;
          acc += samples(i, j) * Complex(std::cos(ang), std::sin(ang));
        }
      out(a, b) = acc / (static_cast<Real>(n) * n);
    }
  return out;
}

/// Direct evaluation: f(x) = sum_k c(k) e^{2 pi i k.x} at collocation points.
inline ArrayXXr idft_direct(const Grid& g, const ArrayXXc& coef) {
  const int n = g.n;
  ArrayXXr out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex acc(0, 0);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Real ang = kTwoPi *
                     (static_cast<Real>(g.mode(a)) * i + static_cast<Real>(g.mode(b)) * j) /
                     n;
          acc += coef(a, b) * Complex(std::cos(ang), std::sin(ang));
        }
      out(i, j) = acc.real();
    }
  return out;
}

/// Trapezoid L^p quadrature on an analytically refined sampling of a single
/// trigonometric mode field is unnecessary; for oracle purposes we evaluate
/// L^p norms by direct summation on a refined grid of the interpolant.
inline Real lp_refined(const ScalarField& f, Real p, int refine) {
  const int n = f.grid.n * refine;
  Real acc = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex v(0, 0);
      for (int a = 0; a < f.grid.n; ++a)
        for (int b = 0; b < f.grid.n; ++b) {
          Real ang = kTwoPi *
                     (static_cast<Real>(f.grid.mode(a)) * i +
                      static_cast<Real>(f.grid.mode(b)) * j) /
                     n;
          v += f.coef(a, b) * Complex(std::cos(ang), std::sin(ang));
        }
      acc += std::pow(std::abs(v.real()), p);
    }
  return std::pow(acc / (static_cast<Real>(n) * n), 1.0 / p);
}

}  // namespace ci2d::oracle

#endif  // CI2D_TESTS_ORACLES_HPP
