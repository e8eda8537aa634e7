#ifndef CI2D_NOISE_HPP
#define CI2D_NOISE_HPP

#include <cstdint>
#include <optional>

#include "ci2d/calculus.hpp"
#include "ci2d/dyadic.hpp"

namespace ci2d {

struct NoiseConfig {
  uint64_t seed = 0;
  int grid_n = 64;
  int mode_cutoff = 8;  // retain |k|_inf <= cutoff, requires cutoff <= N/2-1
  Real dt = 1.0 / 64;
  bool include_zero_mode = false;
  Real mollifier_eps = 0.0;

  void validate() const;
};

/// Smooth radial mollifier symbol: m(eps k) = s(eps |k|) with s(0) = 1,
/// s monotone, vanishing to all orders at r = 1. eps = 0 disables it.
Real mollifier_symbol(Real eps, Real k1, Real k2);

struct StoppingParams {
  Real level_l = 2.0;  // L >= 2
  Real kappa = 0.15;
  Real p = 1.5;  // integrability of the initial data, in (1,2)

  Real kappa0() const { return std::min(1.0 - 1.0 / p, 2.0 / p - 1.0); }
  void validate() const;
};

struct StoppingTimes {
  Real t_l = 0;
  Real t_l1 = 0;
  Real t_l2 = 0;
  Real t_l3 = 0;
};

struct NoisePath {
  NoiseConfig cfg;
  VectorSeries z;          // Leray-projected stochastic convolution, z(0)=0
  VectorSeries z_eps;      // spatially mollified z
  SymTensorSeries wick;    // z_eps (x) z_eps - C_eps(t)
  std::vector<Mat2> renorm_c;  // C_eps at each grid time
  std::optional<StoppingTimes> stopping;
};

/// Deterministic per-(mode, component, step) Gaussian increments derived from
/// the seed by a splitmix64 hash, so paths are reproducible and increments
/// after a cut time can be regenerated surgically.
Real gaussian_increment(uint64_t seed, int k1, int k2, int comp, int step,
                        int which);

/// Exact Ornstein-Uhlenbeck evolution of the spectral coefficients on [0, T].
/// When mutate_after >= 0, increments at steps > mutate_after are drawn from
/// an alternative stream (used by the causality checks).
NoisePath sample_z(const NoiseConfig& cfg, Real t_final, int mutate_after = -1);

/// Analytic C_eps(t) = sum_k |m(eps k)|^2 (1-e^{-8 pi^2 |k|^2 t})/(8 pi^2 |k|^2)
/// (Id - khat (x) khat) over the retained modes.
Mat2 renorm_constant(const NoiseConfig& cfg, Real t);

/// Populate z_eps, renorm_c and wick on an existing path.
void wick_square(NoisePath& path);

/// Evaluate the stopping times (3.7)-style on the path's time grid; the path
/// must cover [0, L].
StoppingTimes stopping_time(const NoisePath& path, const StoppingParams& sp);

}  // namespace ci2d

#endif  // CI2D_NOISE_HPP
