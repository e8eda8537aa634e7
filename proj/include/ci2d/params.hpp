#ifndef CI2D_PARAMS_HPP
#define CI2D_PARAMS_HPP

#include <optional>
#include <string>
#include <vector>

#include "ci2d/jets.hpp"

namespace ci2d {

/// Full iteration parameter schedule. Desk-scale values are accepted even
/// when they violate the asymptotic smallness conditions; every violated
/// condition is listed in the constraint report instead.
struct IterationParams {
  // primary inputs
  int a = 2;
  int b = 2;
  Real alpha = 0.05;
  Real beta = 0.5;
  Real gamma = 0.125;  // gamma* = 1/gamma should be an integer
  Real energy_k = 2.0;  // K, the energy-splitting constant (> 1)
  Real level_l = 2.5;   // L
  Real data_n = 2.0;    // N, bound on ||u0||_{L^p}
  Real p = 1.5;         // integrability of the initial data
  Real kappa = 0.15;
  int cutoff_r = 4;     // localizer cutoff R of the v^1 equation
  int k_level = 3;      // level at which gamma_q = K

  // desk-scale overrides (empty = use the formula)
  std::optional<Real> ell_override;
  std::optional<int> fq_override;
  std::vector<JetParams> jet_override;  // per target level q+1, may be empty

  Real lambda(int q) const;   // a^{b^q}
  Real delta(int q) const;    // 1/2 lambda_1^{2 beta} lambda_q^{-2 beta}, delta_0 = delta_-1 = 1
  Real sigma_q(int q) const;  // = delta_q
  Real gamma_q(int q) const;  // = delta_q except gamma_{k_level} = K
  Real t_q(int q) const;      // -1 + sum_{1<=r<=q} delta_r^{1/2}
  Real ell(int q) const;      // lambda_{q+1}^{-3 alpha/2} lambda_q^{-2}
  int f_q(int q) const;       // 2^{f(q)} = lambda_q^{alpha/8}, rounded
  Real kappa0() const;
  Real kappa1() const;        // kappa0/4 ^ (1/6 - kappa0/2)
  Real m_l() const;           // max(L^9, N^2 L^2)
  Real big_a() const;         // ([3p/(p-1)] + 1) M_L
  Real implied_c() const;     // C with 2^{kappa0 R} = 4 C L^2
  JetParams jet_params(int q_next, Real mu0) const;  // for level q+1

  void validate() const;
};

struct ConstraintReport {
  std::vector<std::string> violated;
  std::vector<std::string> notes;
  bool clean() const { return violated.empty(); }
};

/// Checks the Section 5.1-style compatibility conditions at desk scale.
ConstraintReport check_constraints(const IterationParams& ip, int q_max);

}  // namespace ci2d

#endif  // CI2D_PARAMS_HPP
