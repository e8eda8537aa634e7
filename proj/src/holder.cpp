#include "ci2d/holder.hpp"

#include <cmath>
#include <stdexcept>

#include "ci2d/calculus.hpp"
#include "ci2d/fft.hpp"

namespace ci2d {

namespace {

Real lp_window(const std::vector<Real>& vals, Real p, Real dx) {
  if (std::isinf(p)) {
    Real m = 0;
    for (Real v : vals) m = std::max(m, std::abs(v));
    return m;
  }
  Real acc = 0;
  for (Real v : vals) acc += std::pow(std::abs(v), p);
  return std::pow(acc * dx, 1.0 / p);
}

Real lipschitz_norm(const std::vector<Real>& a_vals, Real dx) {
  Real sup = 0, lip = 0;
  for (size_t i = 0; i < a_vals.size(); ++i) {
    sup = std::max(sup, std::abs(a_vals[i]));
    if (i) lip = std::max(lip, std::abs(a_vals[i] - a_vals[i - 1]) / dx);
  }
  return sup + lip;
}

}  // namespace

HolderGapReport improved_holder_check(const std::function<Real(Real)>& a,
                                      const std::vector<Real>& f_period, Real p,
                                      int sigma, int m, int n) {
  if (n <= m) throw std::invalid_argument("empty window");
  if (sigma < 1) throw std::invalid_argument("sigma must be >= 1");
  const int M = static_cast<int>(f_period.size());
  const int len = (n - m) * M;
  const Real dx = 1.0 / (static_cast<Real>(sigma) * M);

  std::vector<Real> av(static_cast<size_t>(len)), prod(static_cast<size_t>(len));
  for (int r = 0; r < len; ++r) {
    Real x = static_cast<Real>(m) / sigma + r * dx;
    Real fa = f_period[static_cast<size_t>(r % M)];
    av[static_cast<size_t>(r)] = a(x);
    prod[static_cast<size_t>(r)] = av[static_cast<size_t>(r)] * fa;
  }
  Real f_lp = lp_window(f_period, p, 1.0 / M);

  HolderGapReport rep;
  rep.lhs_gap = std::abs(lp_window(prod, p, dx) - lp_window(av, p, dx) * f_lp);
  Real invp = std::isinf(p) ? 0.0 : 1.0 / p;
  rep.bound = std::pow(static_cast<Real>(sigma), -invp) *
              std::pow(static_cast<Real>(n - m) / sigma, invp) *
              lipschitz_norm(av, dx) * f_lp;
  rep.implied_constant = rep.bound > 0 ? rep.lhs_gap / rep.bound : 0;
  return rep;
}

HolderGapReport improved_holder_meanzero(const std::function<Real(Real)>& a,
                                         const std::vector<Real>& f_period,
                                         int sigma, int m, int n) {
  if (n <= m) throw std::invalid_argument("empty window");
  const int M = static_cast<int>(f_period.size());
  const int len = (n - m) * M;
  const Real dx = 1.0 / (static_cast<Real>(sigma) * M);
  std::vector<Real> av(static_cast<size_t>(len));
  Real integral = 0, f_l1 = 0;
  for (int r = 0; r < len; ++r) {
    Real x = static_cast<Real>(m) / sigma + r * dx;
    av[static_cast<size_t>(r)] = a(x);
    integral += av[static_cast<size_t>(r)] * f_period[static_cast<size_t>(r % M)];
  }
  integral *= dx;
  for (Real v : f_period) f_l1 += std::abs(v);
  f_l1 /= M;

  HolderGapReport rep;
  rep.lhs_gap = std::abs(integral);
  rep.bound = static_cast<Real>(n - m) / (static_cast<Real>(sigma) * sigma) *
              lipschitz_norm(av, dx) * f_l1;
  rep.implied_constant = rep.bound > 0 ? rep.lhs_gap / rep.bound : 0;
  return rep;
}

HolderGapReport improved_holder_check(const ScalarField& a, const ScalarField& f,
                                      Real p, int sigma) {
  require_same_grid(a.grid, f.grid);
  const int n = a.grid.n;
  ArrayXXr fs = to_physical(f);
  // a on the sigma-refined grid via zero padding of its spectrum.
  Grid fine(n * sigma);
  ScalarField a_fine(fine);
  int half = n / 2;
  for (int k1 = -(half - 1); k1 <= half - 1; ++k1)
    for (int k2 = -(half - 1); k2 <= half - 1; ++k2)
      a_fine.at_mode(k1, k2) = a.at_mode(k1, k2);
  ArrayXXr as = to_physical(a_fine);

  const int fn = fine.n;
  const Real cell = 1.0 / (static_cast<Real>(fn) * fn);
  Real prod_acc = 0, a_acc = 0, f_acc = 0, a_sup = 0;
  for (int i = 0; i < fn; ++i)
    for (int j = 0; j < fn; ++j) {
      // f(sigma x) at x = (i/fn, j/fn): sigma x = (i/n, j/n) mod 1.
      Real fval = fs(i % n, j % n);
      Real aval = as(i, j);
      prod_acc += std::pow(std::abs(aval * fval), p);
      a_acc += std::pow(std::abs(aval), p);
      a_sup = std::max(a_sup, std::abs(aval));
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f_acc += std::pow(std::abs(fs(i, j)), p);
  Real f_lp = std::pow(f_acc / (static_cast<Real>(n) * n), 1.0 / p);

  // Lipschitz seminorm of a from spectral gradient.
  Real grad_sup = norm_linf(gradient(a));

  HolderGapReport rep;
  rep.lhs_gap =
      std::abs(std::pow(prod_acc * cell, 1.0 / p) - std::pow(a_acc * cell, 1.0 / p) * f_lp);
  rep.bound = std::pow(static_cast<Real>(sigma), -1.0 / p) *
              std::pow(1.0, 2.0 / p) * (a_sup + grad_sup) * f_lp;
  rep.implied_constant = rep.bound > 0 ? rep.lhs_gap / rep.bound : 0;
  return rep;
}

Real fitted_slope(const std::vector<Real>& sigmas, const std::vector<Real>& gaps) {
  if (sigmas.size() != gaps.size() || sigmas.size() < 2)
    throw std::invalid_argument("slope fit needs matching samples");
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < sigmas.size(); ++i) {
    if (gaps[i] <= 0) continue;
    Real x = std::log(sigmas[i]), y = std::log(gaps[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 0;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ci2d
