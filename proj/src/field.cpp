#include "ci2d/field.hpp"

#include <cmath>
#include <random>

#include "ci2d/fft.hpp"

namespace ci2d {

void enforce_reality(const Grid& g, ArrayXXc& coef) {
  const int n = g.n;
  for (int a = 0; a < n; ++a) {
    int am = (n - a) % n;
    for (int b = 0; b < n; ++b) {
      int bm = (n - b) % n;
      if (a < am || (a == am && b <= bm)) {
        Complex c1 = coef(a, b);
        Complex c2 = coef(am, bm);
        Complex avg = Real(0.5) * (c1 + std::conj(c2));
        coef(a, b) = avg;
        coef(am, bm) = std::conj(avg);
        if (a == am && b == bm) coef(a, b) = Complex(avg.real(), 0.0);
      }
    }
  }
}

ScalarField to_spectral(const Grid& g, const ArrayXXr& samples) {
  if (samples.rows() != g.n || samples.cols() != g.n)
    throw std::invalid_argument("to_spectral: sample dimensions do not match grid");
  ScalarField f(g);
  f.coef = samples.cast<Complex>();
  fft_2d(f.coef, -1);
  f.coef /= static_cast<Real>(g.n) * static_cast<Real>(g.n);
  enforce_reality(g, f.coef);
  return f;
}

ArrayXXr to_physical(const ArrayXXc& coef) {
  ArrayXXc tmp = coef;
  fft_2d(tmp, +1);
  return tmp.real();
}

ArrayXXr to_physical(const ScalarField& f) { return to_physical(f.coef); }

VectorField to_spectral(const Grid& g, const ArrayXXr& s1, const ArrayXXr& s2) {
  VectorField v(g);
  v.comp[0] = to_spectral(g, s1).coef;
  v.comp[1] = to_spectral(g, s2).coef;
  return v;
}

std::array<ArrayXXr, 2> to_physical(const VectorField& v) {
  return {to_physical(v.comp[0]), to_physical(v.comp[1])};
}

std::array<ArrayXXr, 3> to_physical(const SymTensorField& t) {
  return {to_physical(t.comp[0]), to_physical(t.comp[1]), to_physical(t.comp[2])};
}

ScalarField sample_function(const Grid& g,
                            const std::function<Real(Real, Real)>& f) {
  ArrayXXr s(g.n, g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      s(i, j) = f(static_cast<Real>(i) / g.n, static_cast<Real>(j) / g.n);
  return to_spectral(g, s);
}

ScalarField random_band_limited(const Grid& g, int max_mode, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> u(-1.0, 1.0);
  ScalarField f(g);
  int m = std::min(max_mode, g.nyquist() - 1);
  for (int k1 = -m; k1 <= m; ++k1)
    for (int k2 = -m; k2 <= m; ++k2)
      f.at_mode(k1, k2) = Complex(u(rng), u(rng));
  enforce_reality(g, f.coef);
  return f;
}

VectorField random_vector_field(const Grid& g, int max_mode, uint64_t seed) {
  VectorField v(g);
  v.comp[0] = random_band_limited(g, max_mode, seed * 2 + 1).coef;
  v.comp[1] = random_band_limited(g, max_mode, seed * 2 + 2).coef;
  return v;
}

}  // namespace ci2d
