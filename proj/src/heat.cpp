#include "ci2d/heat.hpp"

#include <cmath>
#include <stdexcept>

namespace ci2d {

namespace {

std::function<Complex(int, int)> heat_multiplier(Real t) {
  if (t < 0) throw std::invalid_argument("heat_semigroup: negative time");
  return [t](int k1, int k2) {
    return Complex(
        std::exp(-4.0 * kPi * kPi * (Real(k1) * k1 + Real(k2) * k2) * t), 0);
  };
}

}  // namespace

ScalarField heat_semigroup(const ScalarField& f, Real t) {
  return multiplied(f, heat_multiplier(t));
}
VectorField heat_semigroup(const VectorField& v, Real t) {
  return multiplied(v, heat_multiplier(t));
}
SymTensorField heat_semigroup(const SymTensorField& s, Real t) {
  return multiplied(s, heat_multiplier(t));
}

// Per-mode ETD quadrature: for each step [t_i, t_{i+1}) the forcing is held
// constant, so the contribution is fhat(k, t_i) e^{-lam (t-t_{i+1})}
// (1 - e^{-lam dt})/lam, accumulated Horner-style from the oldest step.
ScalarField duhamel(const ScalarSeries& f, Real t) {
  if (f.steps() == 0) throw std::out_of_range("duhamel: empty series");
  int iend = f.index_of(t);
  ScalarField out(f.values[0].grid);
  const Grid& g = out.grid;
  const Real dt = f.dt;
  for (int a = 0; a < g.n; ++a) {
    Real k1 = g.mode(a);
    for (int b = 0; b < g.n; ++b) {
      Real k2 = g.mode(b);
      Real lam = 4.0 * kPi * kPi * (k1 * k1 + k2 * k2);
      Real decay = std::exp(-lam * dt);
      Real w = lam == 0 ? dt : (1.0 - decay) / lam;
      // Horner over steps: newest step decays least.
      Complex acc(0, 0);
      for (int i = 0; i < iend; ++i)
        acc = acc * decay + f.values[static_cast<size_t>(i)].coef(a, b);
      out.coef(a, b) = acc * w;
    }
  }
  return out;
}

VectorField duhamel(const VectorSeries& f, Real t) {
  if (f.steps() == 0) throw std::out_of_range("duhamel: empty series");
  int iend = f.index_of(t);
  VectorField out(f.values[0].grid);
  const Grid& g = out.grid;
  const Real dt = f.dt;
  for (int c = 0; c < 2; ++c) {
    for (int a = 0; a < g.n; ++a) {
      Real k1 = g.mode(a);
      for (int b = 0; b < g.n; ++b) {
        Real k2 = g.mode(b);
        Real lam = 4.0 * kPi * kPi * (k1 * k1 + k2 * k2);
        Real decay = std::exp(-lam * dt);
        Real w = lam == 0 ? dt : (1.0 - decay) / lam;
        Complex acc(0, 0);
        for (int i = 0; i < iend; ++i)
          acc = acc * decay + f.values[static_cast<size_t>(i)].comp[static_cast<size_t>(c)](a, b);
        out.comp[static_cast<size_t>(c)](a, b) = acc * w;
      }
    }
  }
  return out;
}

SchauderReport schauder_monitor(const ScalarField& f, Real theta, Real alpha,
                                Real p, Real q, const std::vector<Real>& t_sweep) {
  if (theta <= 0 || theta >= 2)
    throw std::invalid_argument("schauder_monitor: theta must lie in (0,2)");
  SchauderReport rep;
  Real base = besov_norm(f, BesovIndex(alpha, p, q));
  Real tmin = t_sweep.front(), tmax = t_sweep.back();
  for (Real t : t_sweep) {
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
  }
  for (Real t : t_sweep) {
    Real ratio = base > 0
                     ? std::pow(t, theta / 2) *
                           besov_norm(heat_semigroup(f, t),
                                      BesovIndex(theta + alpha, p, q)) /
                           base
                     : 0.0;
    rep.times.push_back(t);
    rep.ratios.push_back(ratio);
    rep.sup_ratio = std::max(rep.sup_ratio, ratio);
    Real mid = std::sqrt(tmin * tmax);
    if (t <= mid)
      rep.sup_lower_decade = std::max(rep.sup_lower_decade, ratio);
    else
      rep.sup_upper_decade = std::max(rep.sup_upper_decade, ratio);
  }
  return rep;
}

Real contraction_factor(const VectorSeries& v1, const VectorSeries& v2,
                        const VectorSeries& z, Real t_star, Real zeta, Real kappa) {
  if (!(2 * kappa + zeta > 0) || !(2 * kappa + zeta < 1))
    throw std::invalid_argument("contraction_factor: need 0 < 2 kappa + zeta < 1");
  int nstep = v1.index_of(t_star);
  const Real dt = v1.dt;

  // w = v1 - v2; forcing F(s) = P_H div((v1+z) (x) w + w (x) (v2+z)).
  VectorSeries forcing(v1.t0, dt);
  Real wnorm_sq = 0;
  std::vector<VectorField> w(static_cast<size_t>(nstep + 1));
  for (int i = 0; i <= nstep; ++i) {
    w[static_cast<size_t>(i)] = v1.at(i) - v2.at(i);
    Real ns = norm_hs(w[static_cast<size_t>(i)], zeta);
    wnorm_sq += ns * ns * dt;
  }
  if (wnorm_sq == 0) return 0;
  for (int i = 0; i <= nstep; ++i) {
    VectorField a = v1.at(i) + z.at(i);
    VectorField b = v2.at(i) + z.at(i);
    Tensor2Field flux = outer(a, w[static_cast<size_t>(i)]) +
                        outer(w[static_cast<size_t>(i)], b);
    forcing.values.push_back(helmholtz_project(divergence(flux)));
  }

  Real phinorm_sq = 0;
  for (int i = 0; i <= nstep; ++i) {
    VectorField phi = duhamel(forcing, forcing.time(i));
    Real ns = norm_hs(phi, zeta);
    phinorm_sq += ns * ns * dt;
  }
  return std::sqrt(phinorm_sq / wnorm_sq);
}

}  // namespace ci2d
