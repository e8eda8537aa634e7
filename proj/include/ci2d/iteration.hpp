#ifndef CI2D_ITERATION_HPP
#define CI2D_ITERATION_HPP

#include <map>
#include <optional>

#include "ci2d/antidiv.hpp"
#include "ci2d/heat.hpp"
#include "ci2d/noise.hpp"
#include "ci2d/paraproduct.hpp"
#include "ci2d/params.hpp"

namespace ci2d {

struct IterationConfig {
  int grid_n = 64;
  Real dt = 1.0 / 128;
  Real t_min = -1.0;
  int jet_directions = 6;
  Real jet_mu0 = 10.0;
  int jet_band_cap = 2;  // lattice band of the jet shapes
  bool noise_enabled = true;
  int noise_cutoff = 4;
  Real noise_eps = 0.0;
  uint64_t seed = 1;
  bool track_identities = true;
  bool track_residual = false;  // master PDE residual sweep per level
};

struct LevelDiagnostics {
  int q = 0;
  std::map<std::string, Real> values;
};

struct IterationState {
  int q = 0;
  Real t_l = 0;
  VectorSeries v1, v2;
  SymTensorSeries stress;
  LevelDiagnostics diag;
};

struct SolveV1Log {
  int iterations = 0;
  bool converged = false;
  std::vector<Real> increments;  // successive sup_t L2 differences
  Real contraction_ratio = 0;
};

struct MollifiedLevel {
  VectorSeries v_ell;
  SymTensorSeries r_ell;
  SymTensorSeries dt_r_ell;  // convolution with the mollifier derivative
};

/// Pointwise amplitude data at one time slice.
struct AmplitudeSlice {
  ArrayXXr rho;                      // physical samples
  std::vector<ArrayXXr> a;           // per direction
  std::vector<ArrayXXr> a_sq;
  std::vector<ArrayXXr> dt_a_sq;     // analytic time derivative
  Real domain_margin = 0;            // sup |R_ell|_F / rho (must be <= 1/2)
  Real reconstruction_error = 0;     // |rho Id - R_ell - sum a^2 xi xi|_inf
};

/// Convex-integration driver: owns the noise path, the initial-data heat
/// flow and the global time grid on [t_min, T_L].
class ConvexIntegrator {
 public:
  ConvexIntegrator(IterationParams params, IterationConfig config,
                   const VectorField& u0);

  const IterationParams& params() const { return params_; }
  const IterationConfig& config() const { return config_; }
  const NoisePath& path() const { return path_; }
  const JetSystem& jets() const { return *jets_; }
  Real t_l() const { return t_l_; }
  Real dt() const { return config_.dt; }
  int index_of(Real t) const;
  Real time_of(int i) const { return config_.t_min + config_.dt * i; }
  int steps() const { return n_steps_; }
  int i_zero() const { return i_zero_; }
  const VectorSeries& z_in() const { return z_in_; }

  IterationState init_state();
  IterationState advance(const IterationState& s);
  std::vector<IterationState> iterate(int q_max);

  VectorSeries solve_v1(int q, const VectorSeries& v2, SolveV1Log* log = nullptr) const;
  MollifiedLevel mollify_step(const IterationState& s) const;
  AmplitudeSlice amplitudes(const SymTensorField& r_ell,
                            const SymTensorField& dt_r_ell, int q_next) const;

  /// Smooth cutoff: 0 on t <= sigma_{q+1}, 1 on t >= 2 sigma_{q+1}.
  Real chi(Real t, int q_next) const;
  Real chi_prime(Real t, int q_next) const;

  /// Full quadratic+noise flux of the v^2 equation at one time index.
  SymTensorField flux_q(const VectorField& v1t, const VectorField& v2t,
                        int i) const;

  /// Sup over interior grid times of ||P_H(d_t v2 - lap v2 + div Q - div R)||_{H^-2}.
  Real master_residual(const IterationState& s) const;

  LevelDiagnostics diagnostics(const IterationState& prev,
                               const IterationState& next) const;

 private:
  struct PerturbationSlice {
    VectorField wp, wc, wo, wa;  // unscaled pieces
    VectorField w_total;         // chi wp + chi wc + chi^2 (wo + wa)
    Real identity_4_10 = 0;
    Real identity_wp_wc = 0;
  };

  VectorField zero_nyquist(const VectorField& v) const;
  VectorField z_at(int i) const;        // zero before t = 0
  VectorField z_low(int i) const;       // Delta_{<=R} z
  VectorField z_high(int i) const;      // Delta_{>R} z
  VectorField z_fq(int i, int q) const; // Delta_{<=f(q)} Delta_{>R} z
  SymTensorField wick_at(int i) const;
  SymTensorField n_com(const IterationState& s, int i) const;

  PerturbationSlice perturbation(const IterationState& s, const MollifiedLevel& ml,
                                 const AmplitudeSlice& amp, int i, int q_next,
                                 std::map<std::string, Real>* track) const;

  IterationParams params_;
  IterationConfig config_;
  VectorField u0_;
  NoisePath path_;
  VectorSeries z_in_;
  std::unique_ptr<JetSystem> jets_;
  Real t_l_ = 0;
  int n_steps_ = 0;
  int i_zero_ = 0;
  bool z_high_vanishes_ = false;
};

}  // namespace ci2d

#endif  // CI2D_ITERATION_HPP
