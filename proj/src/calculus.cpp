#include "ci2d/calculus.hpp"

#include <cmath>

#include "ci2d/fft.hpp"

namespace ci2d {

// ---- multipliers -------------------------------------------------------

void apply_multiplier(const Grid& g, ArrayXXc& coef,
                      const std::function<Complex(int, int)>& m) {
  for (int a = 0; a < g.n; ++a) {
    int k1 = g.mode(a);
    for (int b = 0; b < g.n; ++b) coef(a, b) *= m(k1, g.mode(b));
  }
}

ScalarField multiplied(const ScalarField& f,
                       const std::function<Complex(int, int)>& m) {
  ScalarField out = f;
  apply_multiplier(f.grid, out.coef, m);
  return out;
}

VectorField multiplied(const VectorField& v,
                       const std::function<Complex(int, int)>& m) {
  VectorField out = v;
  apply_multiplier(v.grid, out.comp[0], m);
  apply_multiplier(v.grid, out.comp[1], m);
  return out;
}

SymTensorField multiplied(const SymTensorField& t,
                          const std::function<Complex(int, int)>& m) {
  SymTensorField out = t;
  for (auto& c : out.comp) apply_multiplier(t.grid, c, m);
  return out;
}

// ---- differential calculus --------------------------------------------

namespace {

void derivative_inplace(const Grid& g, ArrayXXc& coef, int axis, int order) {
  const int n = g.n;
  for (int a = 0; a < n; ++a) {
    int k1 = g.mode(a);
    for (int b = 0; b < n; ++b) {
      int k = (axis == 1) ? k1 : g.mode(b);
      Complex s;
      if (order % 2 == 1 && k == -n / 2) {
        s = Complex(0, 0);  // unpaired Nyquist line, keep the field real
      } else {
        s = std::pow(Complex(0, kTwoPi * k), order);
      }
      coef(a, b) *= s;
    }
  }
}

}  // namespace

ScalarField derivative(const ScalarField& f, int axis, int order) {
  ScalarField out = f;
  derivative_inplace(f.grid, out.coef, axis, order);
  return out;
}

VectorField derivative(const VectorField& v, int axis, int order) {
  VectorField out = v;
  derivative_inplace(v.grid, out.comp[0], axis, order);
  derivative_inplace(v.grid, out.comp[1], axis, order);
  return out;
}

SymTensorField derivative(const SymTensorField& t, int axis, int order) {
  SymTensorField out = t;
  for (auto& c : out.comp) derivative_inplace(t.grid, c, axis, order);
  return out;
}

VectorField gradient(const ScalarField& f) {
  VectorField out(f.grid);
  out.comp[0] = derivative(f, 1, 1).coef;
  out.comp[1] = derivative(f, 2, 1).coef;
  return out;
}

VectorField perp_gradient(const ScalarField& f) {
  VectorField out(f.grid);
  out.comp[0] = derivative(f, 2, 1).coef;
  out.comp[1] = (-derivative(f, 1, 1).coef);
  return out;
}

ScalarField divergence(const VectorField& v) {
  ScalarField out(v.grid);
  ScalarField c0 = v.component(0);
  ScalarField c1 = v.component(1);
  out.coef = derivative(c0, 1, 1).coef + derivative(c1, 2, 1).coef;
  return out;
}

VectorField divergence(const SymTensorField& t) {
  // (div T)_i = d_j T_{ij}
  VectorField out(t.grid);
  out.comp[0] = derivative(t.component(0), 1, 1).coef +
                derivative(t.component(1), 2, 1).coef;
  out.comp[1] = derivative(t.component(1), 1, 1).coef +
                derivative(t.component(2), 2, 1).coef;
  return out;
}

VectorField divergence(const Tensor2Field& t) {
  VectorField out(t.grid);
  ScalarField t11(t.grid), t12(t.grid), t21(t.grid), t22(t.grid);
  t11.coef = t(0, 0);
  t12.coef = t(0, 1);
  t21.coef = t(1, 0);
  t22.coef = t(1, 1);
  out.comp[0] = derivative(t11, 1, 1).coef + derivative(t12, 2, 1).coef;
  out.comp[1] = derivative(t21, 1, 1).coef + derivative(t22, 2, 1).coef;
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  return multiplied(f, [](int k1, int k2) {
    return Complex(-4.0 * kPi * kPi * (Real(k1) * k1 + Real(k2) * k2), 0);
  });
}

VectorField laplacian(const VectorField& v) {
  return multiplied(v, [](int k1, int k2) {
    return Complex(-4.0 * kPi * kPi * (Real(k1) * k1 + Real(k2) * k2), 0);
  });
}

ScalarField inverse_laplacian(const ScalarField& f) {
  return multiplied(f, [](int k1, int k2) {
    Real k2n = Real(k1) * k1 + Real(k2) * k2;
    if (k2n == 0) return Complex(0, 0);
    return Complex(-1.0 / (4.0 * kPi * kPi * k2n), 0);
  });
}

Complex mean(const ScalarField& f) { return f.coef(0, 0); }

Vec2 mean(const VectorField& v) {
  return Vec2(v.comp[0](0, 0).real(), v.comp[1](0, 0).real());
}

Mat2 mean(const SymTensorField& t) {
  Mat2 m;
  m << t.comp[0](0, 0).real(), t.comp[1](0, 0).real(), t.comp[1](0, 0).real(),
      t.comp[2](0, 0).real();
  return m;
}

ScalarField remove_mean(const ScalarField& f) {
  ScalarField out = f;
  out.coef(0, 0) = Complex(0, 0);
  return out;
}

VectorField remove_mean(const VectorField& v) {
  VectorField out = v;
  out.comp[0](0, 0) = Complex(0, 0);
  out.comp[1](0, 0) = Complex(0, 0);
  return out;
}

SymTensorField remove_mean(const SymTensorField& t) {
  SymTensorField out = t;
  for (auto& c : out.comp) c(0, 0) = Complex(0, 0);
  return out;
}

SymTensorField traceless(const SymTensorField& t) {
  SymTensorField out = t;
  ArrayXXc half_tr = Real(0.5) * (t.comp[0] + t.comp[2]);
  out.comp[0] -= half_tr;
  out.comp[2] -= half_tr;
  return out;
}

SymTensorField symmetric_part(const Tensor2Field& t) {
  SymTensorField out(t.grid);
  out.comp[0] = t(0, 0);
  out.comp[1] = Real(0.5) * (t(0, 1) + t(1, 0));
  out.comp[2] = t(1, 1);
  return out;
}

SymTensorField traceless_symmetric(const Tensor2Field& t) {
  return traceless(symmetric_part(t));
}

VectorField helmholtz_project(const VectorField& v) {
  VectorField out = v;
  const Grid& g = v.grid;
  for (int a = 0; a < g.n; ++a) {
    Real k1 = g.mode(a);
    for (int b = 0; b < g.n; ++b) {
      Real k2 = g.mode(b);
      Real kk = k1 * k1 + k2 * k2;
      if (kk == 0) continue;
      Complex dotkv = (k1 * out.comp[0](a, b) + k2 * out.comp[1](a, b)) / kk;
      out.comp[0](a, b) -= k1 * dotkv;
      out.comp[1](a, b) -= k2 * dotkv;
    }
  }
  return out;
}

// ---- arithmetic --------------------------------------------------------

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid);
  ScalarField out = a;
  out.coef += b.coef;
  return out;
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid);
  ScalarField out = a;
  out.coef -= b.coef;
  return out;
}
ScalarField operator*(Real s, const ScalarField& f) {
  ScalarField out = f;
  out.coef *= s;
  return out;
}
VectorField operator+(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid, b.grid);
  VectorField out = a;
  out.comp[0] += b.comp[0];
  out.comp[1] += b.comp[1];
  return out;
}
VectorField operator-(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid, b.grid);
  VectorField out = a;
  out.comp[0] -= b.comp[0];
  out.comp[1] -= b.comp[1];
  return out;
}
VectorField operator*(Real s, const VectorField& v) {
  VectorField out = v;
  out.comp[0] *= s;
  out.comp[1] *= s;
  return out;
}
SymTensorField operator+(const SymTensorField& a, const SymTensorField& b) {
  require_same_grid(a.grid, b.grid);
  SymTensorField out = a;
  for (int i = 0; i < 3; ++i) out.comp[i] += b.comp[i];
  return out;
}
SymTensorField operator-(const SymTensorField& a, const SymTensorField& b) {
  require_same_grid(a.grid, b.grid);
  SymTensorField out = a;
  for (int i = 0; i < 3; ++i) out.comp[i] -= b.comp[i];
  return out;
}
SymTensorField operator*(Real s, const SymTensorField& t) {
  SymTensorField out = t;
  for (auto& c : out.comp) c *= s;
  return out;
}
Tensor2Field operator+(const Tensor2Field& a, const Tensor2Field& b) {
  require_same_grid(a.grid, b.grid);
  Tensor2Field out = a;
  for (int i = 0; i < 4; ++i) out.comp[i] += b.comp[i];
  return out;
}
Tensor2Field operator-(const Tensor2Field& a, const Tensor2Field& b) {
  require_same_grid(a.grid, b.grid);
  Tensor2Field out = a;
  for (int i = 0; i < 4; ++i) out.comp[i] -= b.comp[i];
  return out;
}
Tensor2Field operator*(Real s, const Tensor2Field& t) {
  Tensor2Field out = t;
  for (auto& c : out.comp) c *= s;
  return out;
}

// ---- dealiased products -------------------------------------------------

int dealias_pad_size(int n) {
  int target = (3 * n + 1) / 2;
  for (int m = target;; ++m) {
    int r = m;
    while (r % 2 == 0) r /= 2;
    while (r % 3 == 0) r /= 3;
    if (r == 1) return m;
  }
}

namespace {

// Copy modes with |k|_inf <= N/2-1 into a larger (or equal) grid.
ArrayXXc pad_modes(const Grid& g, const ArrayXXc& coef, int m) {
  ArrayXXc out = ArrayXXc::Zero(m, m);
  int half = g.n / 2;
  for (int k1 = -(half - 1); k1 <= half - 1; ++k1) {
    int a = g.index(k1), ap = k1 >= 0 ? k1 : k1 + m;
    for (int k2 = -(half - 1); k2 <= half - 1; ++k2) {
      int b = g.index(k2), bp = k2 >= 0 ? k2 : k2 + m;
      out(ap, bp) = coef(a, b);
    }
  }
  return out;
}

ArrayXXc truncate_modes(int m, const ArrayXXc& coef, const Grid& g) {
  ArrayXXc out = ArrayXXc::Zero(g.n, g.n);
  int half = g.n / 2;
  for (int k1 = -(half - 1); k1 <= half - 1; ++k1) {
    int a = g.index(k1), ap = k1 >= 0 ? k1 : k1 + m;
    for (int k2 = -(half - 1); k2 <= half - 1; ++k2) {
      int b = g.index(k2), bp = k2 >= 0 ? k2 : k2 + m;
      out(a, b) = coef(ap, bp);
    }
  }
  return out;
}

ArrayXXr padded_physical(const Grid& g, const ArrayXXc& coef, int m) {
  ArrayXXc big = pad_modes(g, coef, m);
  fft_2d(big, +1);
  return big.real();
}

ArrayXXc physical_to_band(const ArrayXXr& samples, const Grid& g) {
  int m = static_cast<int>(samples.rows());
  ArrayXXc big = samples.cast<Complex>();
  fft_2d(big, -1);
  big /= static_cast<Real>(m) * static_cast<Real>(m);
  return truncate_modes(m, big, g);
}

}  // namespace

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid);
  int m = dealias_pad_size(a.grid.n);
  ArrayXXr pa = padded_physical(a.grid, a.coef, m);
  ArrayXXr pb = padded_physical(b.grid, b.coef, m);
  ScalarField out(a.grid);
  out.coef = physical_to_band(pa * pb, a.grid);
  return out;
}

VectorField multiply(const ScalarField& a, const VectorField& b) {
  require_same_grid(a.grid, b.grid);
  int m = dealias_pad_size(a.grid.n);
  ArrayXXr pa = padded_physical(a.grid, a.coef, m);
  VectorField out(b.grid);
  for (int i = 0; i < 2; ++i) {
    ArrayXXr pb = padded_physical(b.grid, b.comp[static_cast<size_t>(i)], m);
    out.comp[static_cast<size_t>(i)] = physical_to_band(pa * pb, b.grid);
  }
  return out;
}

SymTensorField multiply(const ScalarField& a, const SymTensorField& b) {
  require_same_grid(a.grid, b.grid);
  int m = dealias_pad_size(a.grid.n);
  ArrayXXr pa = padded_physical(a.grid, a.coef, m);
  SymTensorField out(b.grid);
  for (int i = 0; i < 3; ++i) {
    ArrayXXr pb = padded_physical(b.grid, b.comp[static_cast<size_t>(i)], m);
    out.comp[static_cast<size_t>(i)] = physical_to_band(pa * pb, b.grid);
  }
  return out;
}

Tensor2Field outer(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid, b.grid);
  int m = dealias_pad_size(a.grid.n);
  ArrayXXr pa0 = padded_physical(a.grid, a.comp[0], m);
  ArrayXXr pa1 = padded_physical(a.grid, a.comp[1], m);
  ArrayXXr pb0 = padded_physical(b.grid, b.comp[0], m);
  ArrayXXr pb1 = padded_physical(b.grid, b.comp[1], m);
  Tensor2Field out(a.grid);
  out(0, 0) = physical_to_band(pa0 * pb0, a.grid);
  out(0, 1) = physical_to_band(pa0 * pb1, a.grid);
  out(1, 0) = physical_to_band(pa1 * pb0, a.grid);
  out(1, 1) = physical_to_band(pa1 * pb1, a.grid);
  return out;
}

SymTensorField outer_sym(const VectorField& a) {
  int m = dealias_pad_size(a.grid.n);
  ArrayXXr p0 = padded_physical(a.grid, a.comp[0], m);
  ArrayXXr p1 = padded_physical(a.grid, a.comp[1], m);
  SymTensorField out(a.grid);
  out.comp[0] = physical_to_band(p0 * p0, a.grid);
  out.comp[1] = physical_to_band(p0 * p1, a.grid);
  out.comp[2] = physical_to_band(p1 * p1, a.grid);
  return out;
}

SymTensorField outer_symmetrized(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid, b.grid);
  int m = dealias_pad_size(a.grid.n);
  ArrayXXr pa0 = padded_physical(a.grid, a.comp[0], m);
  ArrayXXr pa1 = padded_physical(a.grid, a.comp[1], m);
  ArrayXXr pb0 = padded_physical(b.grid, b.comp[0], m);
  ArrayXXr pb1 = padded_physical(b.grid, b.comp[1], m);
  SymTensorField out(a.grid);
  out.comp[0] = physical_to_band(2.0 * pa0 * pb0, a.grid);
  out.comp[1] = physical_to_band(pa0 * pb1 + pa1 * pb0, a.grid);
  out.comp[2] = physical_to_band(2.0 * pa1 * pb1, a.grid);
  return out;
}

ScalarField dot(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid, b.grid);
  int m = dealias_pad_size(a.grid.n);
  ArrayXXr pa0 = padded_physical(a.grid, a.comp[0], m);
  ArrayXXr pa1 = padded_physical(a.grid, a.comp[1], m);
  ArrayXXr pb0 = padded_physical(b.grid, b.comp[0], m);
  ArrayXXr pb1 = padded_physical(b.grid, b.comp[1], m);
  ScalarField out(a.grid);
  out.coef = physical_to_band(pa0 * pb0 + pa1 * pb1, a.grid);
  return out;
}

VectorField contract(const VectorField& v, const SymTensorField& t) {
  require_same_grid(v.grid, t.grid);
  int m = dealias_pad_size(v.grid.n);
  ArrayXXr pv0 = padded_physical(v.grid, v.comp[0], m);
  ArrayXXr pv1 = padded_physical(v.grid, v.comp[1], m);
  ArrayXXr t11 = padded_physical(t.grid, t.comp[0], m);
  ArrayXXr t12 = padded_physical(t.grid, t.comp[1], m);
  ArrayXXr t22 = padded_physical(t.grid, t.comp[2], m);
  VectorField out(v.grid);
  out.comp[0] = physical_to_band(pv0 * t11 + pv1 * t12, v.grid);
  out.comp[1] = physical_to_band(pv0 * t12 + pv1 * t22, v.grid);
  return out;
}

// ---- norms ---------------------------------------------------------------

namespace {

Real lp_of_samples(const ArrayXXr& mag, Real p) {
  Real cell = 1.0 / (static_cast<Real>(mag.rows()) * static_cast<Real>(mag.cols()));
  if (p == 1.0) return mag.abs().sum() * cell;
  if (p == 2.0) return std::sqrt((mag * mag).sum() * cell);
  return std::pow(mag.abs().pow(p).sum() * cell, 1.0 / p);
}

}  // namespace

Real norm_lp(const ScalarField& f, Real p) {
  if (std::isinf(p)) return norm_linf(f);
  return lp_of_samples(to_physical(f), p);
}

Real norm_lp(const VectorField& v, Real p) {
  if (std::isinf(p)) return norm_linf(v);
  auto s = to_physical(v);
  ArrayXXr mag = (s[0] * s[0] + s[1] * s[1]).sqrt();
  return lp_of_samples(mag, p);
}

Real norm_lp(const SymTensorField& t, Real p) {
  if (std::isinf(p)) return norm_linf(t);
  auto s = to_physical(t);
  ArrayXXr mag = (s[0] * s[0] + 2.0 * s[1] * s[1] + s[2] * s[2]).sqrt();
  return lp_of_samples(mag, p);
}

Real norm_linf(const ScalarField& f) { return to_physical(f).abs().maxCoeff(); }

Real norm_linf(const VectorField& v) {
  auto s = to_physical(v);
  return (s[0] * s[0] + s[1] * s[1]).sqrt().maxCoeff();
}

Real norm_linf(const SymTensorField& t) {
  auto s = to_physical(t);
  return (s[0] * s[0] + 2.0 * s[1] * s[1] + s[2] * s[2]).sqrt().maxCoeff();
}

namespace {

Real hs_sum(const Grid& g, const ArrayXXc& coef, Real s) {
  Real acc = 0;
  for (int a = 0; a < g.n; ++a) {
    Real k1 = g.mode(a);
    for (int b = 0; b < g.n; ++b) {
      Real k2 = g.mode(b);
      Real w = std::pow(1.0 + 4.0 * kPi * kPi * (k1 * k1 + k2 * k2), s);
      acc += w * std::norm(coef(a, b));
    }
  }
  return acc;
}

}  // namespace

Real norm_hs(const ScalarField& f, Real s) {
  return std::sqrt(hs_sum(f.grid, f.coef, s));
}

Real norm_hs(const VectorField& v, Real s) {
  return std::sqrt(hs_sum(v.grid, v.comp[0], s) + hs_sum(v.grid, v.comp[1], s));
}

namespace {

std::function<Complex(int, int)> bessel_multiplier(Real s) {
  return [s](int k1, int k2) {
    return Complex(
        std::pow(1.0 + 4.0 * kPi * kPi * (Real(k1) * k1 + Real(k2) * k2), s / 2),
        0);
  };
}

}  // namespace

Real norm_wsp(const ScalarField& f, Real s, Real p) {
  return norm_lp(multiplied(f, bessel_multiplier(s)), p);
}

Real norm_wsp(const VectorField& v, Real s, Real p) {
  return norm_lp(multiplied(v, bessel_multiplier(s)), p);
}

Real norm_cn(const ScalarField& f, int n_deriv) {
  Real acc = 0;
  for (int n1 = 0; n1 <= n_deriv; ++n1)
    for (int n2 = 0; n1 + n2 <= n_deriv; ++n2) {
      ScalarField d = f;
      if (n1) d = derivative(d, 1, n1);
      if (n2) d = derivative(d, 2, n2);
      acc += norm_linf(d);
    }
  return acc;
}

Real norm_cn(const VectorField& v, int n_deriv) {
  Real acc = 0;
  for (int n1 = 0; n1 <= n_deriv; ++n1)
    for (int n2 = 0; n1 + n2 <= n_deriv; ++n2) {
      VectorField d = v;
      if (n1) d = derivative(d, 1, n1);
      if (n2) d = derivative(d, 2, n2);
      acc += norm_linf(d);
    }
  return acc;
}

Real norm_cn(const SymTensorField& t, int n_deriv) {
  Real acc = 0;
  for (int n1 = 0; n1 <= n_deriv; ++n1)
    for (int n2 = 0; n1 + n2 <= n_deriv; ++n2) {
      SymTensorField d = t;
      if (n1) d = derivative(d, 1, n1);
      if (n2) d = derivative(d, 2, n2);
      acc += norm_linf(d);
    }
  return acc;
}

}  // namespace ci2d
