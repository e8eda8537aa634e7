#include "ci2d/antidiv.hpp"

#include <cmath>
#include <stdexcept>

#include "ci2d/holder.hpp"

namespace ci2d {

SymTensorField antidiv(const VectorField& v) {
  const Grid& g = v.grid;
  SymTensorField out(g);
  const int half = g.nyquist();
  for (int a = 0; a < g.n; ++a) {
    int k1 = g.mode(a);
    for (int b = 0; b < g.n; ++b) {
      int k2 = g.mode(b);
      if ((k1 == 0 && k2 == 0) || k1 == -half || k2 == -half) continue;
      Complex d1(0, kTwoPi * k1), d2(0, kTwoPi * k2);
      Real lap = -4.0 * kPi * kPi * (Real(k1) * k1 + Real(k2) * k2);
      Complex v1 = v.comp[0](a, b), v2 = v.comp[1](a, b);
      out.comp[0](a, b) = (d1 * v1 - d2 * v2) / lap;
      out.comp[1](a, b) = (d1 * v2 + d2 * v1) / lap;
      out.comp[2](a, b) = (d2 * v2 - d1 * v1) / lap;
    }
  }
  return out;
}

Real antidiv_laplace_identity(const VectorField& v) {
  if (norm_linf(divergence(v)) > 1e-8)
    throw std::invalid_argument("antidiv_laplace_identity: input not divergence-free");
  SymTensorField lhs = antidiv(laplacian(v));
  VectorField d1v = derivative(v, 1, 1);
  VectorField d2v = derivative(v, 2, 1);
  SymTensorField rhs(v.grid);
  rhs.comp[0] = 2.0 * d1v.comp[0];
  rhs.comp[1] = d1v.comp[1] + d2v.comp[0];
  rhs.comp[2] = 2.0 * d2v.comp[1];
  return norm_linf(lhs - rhs);
}

AntidivScalingReport antidiv_scaling_check(const VectorField& f, Real p,
                                           const std::vector<int>& sigmas) {
  Vec2 m = mean(f);
  if (m.norm() > 1e-10)
    throw std::invalid_argument("antidiv_scaling_check: f must be mean-zero");
  AntidivScalingReport rep;
  Real base = norm_lp(f, p);
  for (int s : sigmas) {
    if (s * f.grid.n > 4096)
      throw std::invalid_argument("antidiv_scaling_check: sigma*k_max exceeds grid");
    Grid fine(f.grid.n * s);
    VectorField scaled(fine);
    int half = f.grid.nyquist();
    for (int k1 = -(half - 1); k1 <= half - 1; ++k1)
      for (int k2 = -(half - 1); k2 <= half - 1; ++k2)
        for (int c = 0; c < 2; ++c)
          scaled.comp[static_cast<size_t>(c)](fine.index(s * k1), fine.index(s * k2)) =
              f.comp[static_cast<size_t>(c)](f.grid.index(k1), f.grid.index(k2));
    rep.sigmas.push_back(s);
    rep.ratios.push_back(norm_lp(antidiv(scaled), p) / base);
  }
  std::vector<Real> xs(rep.sigmas.begin(), rep.sigmas.end());
  rep.slope = fitted_slope(xs, rep.ratios);
  return rep;
}

SymTensorField bilinear_antidiv(const VectorField& v, const SymTensorField& a) {
  require_same_grid(v.grid, a.grid);
  Mat2 am = mean(a);
  if (am.norm() > 1e-9)
    throw std::invalid_argument("bilinear_antidiv: A must have zero mean");
  // Rows of A as vector fields.
  VectorField row1(a.grid), row2(a.grid);
  row1.comp[0] = a.comp[0];
  row1.comp[1] = a.comp[1];
  row2.comp[0] = a.comp[1];
  row2.comp[1] = a.comp[2];
  SymTensorField s1 = antidiv(row1), s2 = antidiv(row2);

  SymTensorField first =
      multiply(v.component(0), s1) + multiply(v.component(1), s2);
  VectorField phi =
      contract(gradient(v.component(0)), s1) + contract(gradient(v.component(1)), s2);
  return first - antidiv(phi);
}

SymTensorField bilinear_antidiv(const ScalarField& f, const VectorField& u) {
  require_same_grid(f.grid, u.grid);
  SymTensorField s = antidiv(u);
  SymTensorField first = multiply(f, s);
  VectorField phi = contract(gradient(f), s);
  // Mean part of u is invisible to R; route it back so the divergence
  // identity div B(f,u) = f u - mean(f u) stays exact.
  Vec2 ubar = mean(u);
  SymTensorField out = first - antidiv(phi);
  if (ubar.norm() > 0) {
    ScalarField f0 = remove_mean(f);
    VectorField meanpart(f.grid);
    meanpart.comp[0] = f0.coef * ubar.x();
    meanpart.comp[1] = f0.coef * ubar.y();
    out = out + antidiv(meanpart);
  }
  return out;
}

}  // namespace ci2d
