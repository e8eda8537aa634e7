#include "ci2d/params.hpp"

#include <cmath>
#include <sstream>

namespace ci2d {

Real IterationParams::lambda(int q) const {
  return std::pow(static_cast<Real>(a), std::pow(static_cast<Real>(b), q));
}

Real IterationParams::delta(int q) const {
  if (q <= 0) return 1.0;
  return 0.5 * std::pow(lambda(1), 2.0 * beta) * std::pow(lambda(q), -2.0 * beta);
}

Real IterationParams::sigma_q(int q) const { return delta(q); }

Real IterationParams::gamma_q(int q) const {
  return q == k_level ? energy_k : delta(q);
}

Real IterationParams::t_q(int q) const {
  Real t = -1.0;
  for (int r = 1; r <= q; ++r) t += std::sqrt(delta(r));
  return t;
}

Real IterationParams::ell(int q) const {
  if (ell_override) return *ell_override;
  return std::pow(lambda(q + 1), -1.5 * alpha) * std::pow(lambda(q), -2.0);
}

int IterationParams::f_q(int q) const {
  if (fq_override) return *fq_override;
  Real exact = alpha / 8.0 * std::log2(lambda(q));
  return std::max(0, static_cast<int>(std::lround(exact)));
}

Real IterationParams::kappa0() const {
  return std::min(1.0 - 1.0 / p, 2.0 / p - 1.0);
}

Real IterationParams::kappa1() const {
  return std::min(kappa0() / 4.0, 1.0 / 6.0 - kappa0() / 2.0);
}

Real IterationParams::m_l() const {
  return std::max(std::pow(level_l, 9.0), data_n * data_n * level_l * level_l);
}

Real IterationParams::big_a() const {
  return (std::floor(3.0 * p / (p - 1.0)) + 1.0) * m_l();
}

Real IterationParams::implied_c() const {
  return std::pow(2.0, kappa0() * cutoff_r) / (4.0 * level_l * level_l);
}

JetParams IterationParams::jet_params(int q_next, Real mu0) const {
  if (!jet_override.empty()) {
    size_t idx = std::min(jet_override.size() - 1, static_cast<size_t>(q_next));
    return jet_override[idx];
  }
  Real lam = lambda(q_next);
  JetParams jp;
  jp.sigma = std::max(1, static_cast<int>(std::lround(std::pow(lam, 2.0 * gamma))));
  jp.eta = std::max(1, static_cast<int>(std::lround(std::pow(lam, 16.0 * gamma))));
  jp.nu = std::max(static_cast<int>(mu0) + 1,
                   static_cast<int>(std::lround(std::pow(lam, 1.0 - 8.0 * gamma))));
  jp.mu = std::max(jp.nu, static_cast<int>(std::lround(lam)));
  jp.theta = std::max(1, static_cast<int>(std::lround(std::pow(lam, 1.0 + 5.0 * gamma))));
  return jp;
}

void IterationParams::validate() const {
  if (a < 2 || b < 2) throw std::invalid_argument("IterationParams: a, b >= 2");
  if (alpha <= 0 || beta <= 0 || gamma <= 0 || gamma >= 1)
    throw std::invalid_argument("IterationParams: alpha, beta, gamma positive");
  if (energy_k <= 1) throw std::invalid_argument("IterationParams: K > 1");
  if (level_l < 2) throw std::invalid_argument("IterationParams: L >= 2");
  if (data_n < 2) throw std::invalid_argument("IterationParams: N >= 2");
  if (p <= 1 || p >= 2) throw std::invalid_argument("IterationParams: p in (1,2)");
  if (kappa <= 0 || kappa >= kappa0())
    throw std::invalid_argument("IterationParams: 0 < kappa < kappa0");
}

namespace {

void check(ConstraintReport& rep, bool ok, const std::string& label) {
  if (!ok) rep.violated.push_back(label);
}

}  // namespace

ConstraintReport check_constraints(const IterationParams& ip, int q_max) {
  ConstraintReport rep;
  for (int q = 0; q <= q_max; ++q) {
    std::ostringstream tag;
    tag << " (q=" << q << ")";
    check(rep, 2.0 * ip.delta(q + 1) <= ip.delta(q), "2 delta_{q+1} <= delta_q" + tag.str());
    Real exact_f = ip.alpha / 8.0 * std::log2(ip.lambda(q));
    check(rep, std::abs(exact_f - std::lround(exact_f)) < 1e-9,
          "f(q) integral" + tag.str());
    check(rep, ip.ell(q) <= std::sqrt(ip.delta(q + 1)),
          "ell <= delta_{q+1}^{1/2}" + tag.str());
  }
  check(rep, std::pow(static_cast<Real>(ip.a), 2.0 * ip.beta * (ip.b - 1)) >= 2.0,
        "a^{2 beta (b-1)} >= 2");
  check(rep, std::pow(static_cast<Real>(ip.a), ip.b * ip.beta) >= 4.0,
        "a^{b beta} >= 4");
  check(rep, ip.gamma < 1.0 / 56.0, "gamma < 1/56");
  check(rep, (0.5 - 1.0 / ip.p) * (2.0 - 8.0 * ip.gamma) < -10.0 * ip.gamma,
        "(1/2 - 1/p)(2 - 8 gamma) < -10 gamma");
  check(rep, ip.alpha < ip.gamma / 144.0, "alpha < gamma/144");
  check(rep, ip.alpha > 4.0 / (3.0 * ip.kappa1()) * ip.beta * ip.b,
        "alpha > 4 beta b / (3 kappa1)");
  check(rep, ip.alpha > 16.0 / ip.kappa0() * ip.beta * ip.b * ip.b,
        "alpha > 16 beta b^2 / kappa0");
  check(rep, ip.alpha * ip.b > 16.0 / (3.0 * ip.kappa1()), "alpha b > 16/(3 kappa1)");
  Real gstar = 1.0 / ip.gamma;
  check(rep, std::abs(gstar - std::lround(gstar)) < 1e-9, "1/gamma integral");
  if (ip.ell_override) rep.notes.push_back("ell overridden (desk scale)");
  if (ip.fq_override) rep.notes.push_back("f(q) overridden (desk scale)");
  if (!ip.jet_override.empty())
    rep.notes.push_back("jet parameters overridden (desk scale)");
  return rep;
}

}  // namespace ci2d
