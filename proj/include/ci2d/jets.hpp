#ifndef CI2D_JETS_HPP
#define CI2D_JETS_HPP

#include <array>
#include <map>
#include <memory>
#include <mutex>

#include "ci2d/calculus.hpp"

namespace ci2d {

/// Rational unit directions with anchor points and the positive-weight
/// decomposition R = sum gamma_xi^2(R) xi (x) xi on the Frobenius ball
/// |R - Id|_F <= 1/2.
struct DirectionSet {
  struct Entry {
    Vec2 xi;
    Vec2 xi_perp;  // (xi_2, -xi_1)
    Vec2 anchor;
  };
  std::vector<Entry> entries;
  Real mu0 = 10.0;         // ball separation parameter, > 2
  Real eps_split = 0.2;    // off-diagonal splitting regularizer

  int count() const { return static_cast<int>(entries.size()); }

  /// gamma_xi^2(R) for every direction; all strictly positive on the ball.
  std::vector<Real> gamma_sq(const Mat2& r) const;
  /// Entrywise gradient of gamma_xi^2 with respect to (r11, r12, r22).
  std::vector<Eigen::Vector3d> gamma_sq_gradient(const Mat2& r) const;

  void validate() const;
};

/// The six-direction set used by the construction.
DirectionSet build_direction_set();
/// Axis pair {(1,0),(0,1)} plus the four diagonal directions truncated to
/// `count` entries (2 or 6); smaller sets are for reduced experiments only.
DirectionSet build_direction_set(int count, Real mu0);

struct JetParams {
  int sigma = 1;  // spatial/temporal oscillation
  int eta = 8;    // temporal concentration
  int nu = 4;     // spatial concentration along xi
  int mu = 4;     // spatial concentration across xi
  int theta = 8;  // phase speed

  void validate(Real mu0) const;
};

/// Dense sample representation of a compactly supported profile.
struct Profile1D {
  Real a = 0, b = 0, dx = 0;
  VectorXr vals;

  Profile1D() = default;
  Profile1D(Real lo, Real hi, int samples, const std::function<Real(Real)>& f);
  Real eval(Real u) const;  // cubic interpolation, 0 outside [a,b]
  Real integral() const;    // Simpson
};

struct TemporalOscillators {
  Real g = 0;
  Real dg = 0;
  Real h = 0;
  Real phase = 0;
};

struct JetFieldSet {
  VectorField w;        // W_(xi)
  VectorField w_corr;   // W^(c)_(xi)
  ScalarField psi;      // Psi_(xi)
};

/// Spatial profiles, temporal oscillator tables and per-grid spectral shapes
/// of the accelerating jets. Immutable after construction; evaluations are
/// pure.
class JetSystem {
 public:
  explicit JetSystem(DirectionSet dirs, int profile_samples = 8192);

  const DirectionSet& directions() const { return dirs_; }
  const Profile1D& phi_profile() const { return phi_; }
  const Profile1D& psi_profile() const { return psi_; }
  const Profile1D& psi_deriv_profile() const { return dpsi_; }

  Real g_value(const JetParams& jp, int xi_idx, Real t) const;
  Real g_deriv(const JetParams& jp, int xi_idx, Real t) const;
  Real h_value(const JetParams& jp, int xi_idx, Real t) const;
  Real phase(const JetParams& jp, int xi_idx, Real t) const;
  TemporalOscillators oscillators(const JetParams& jp, int xi_idx, Real t) const;

  Real g_profile(Real t) const;  // the base profile G
  Real int_g_sq() const { return 1.0; }

  /// Normalizers: discrete (ships with the fields, makes the mean of
  /// W (x) W equal xi (x) xi exactly on the grid) and the continuum value
  /// (int phi^2 int psi'^2)^{-1/2} from 1D quadratures.
  Real c_discrete(const JetParams& jp, int xi_idx, const Grid& g,
                  Real band_fraction = 0.5) const;
  Real c_continuum() const;

  /// Spectral jet fields at time t; modes live on the sigma-lattice and are
  /// truncated to |k|_inf <= band_fraction * (N/2-1) so quadratic products
  /// stay alias-free at the default 0.5.
  JetFieldSet fields(const JetParams& jp, int xi_idx, Real t, const Grid& g,
                     Real band_fraction = 0.5) const;

  /// Exact profile evaluation (periodized by wrapping) for support tests and
  /// truncation measurement: value of W~ at a point of [0,1)^2.
  Vec2 w_tilde_exact(const JetParams& jp, int xi_idx, const Vec2& x) const;
  Real psi_tilde_exact(const JetParams& jp, int xi_idx, const Vec2& x) const;

  /// Largest relative mismatch between the band-limited W samples and the
  /// exact profile samples (the controlled-and-measured truncation error).
  Real truncation_error(const JetParams& jp, int xi_idx, const Grid& g,
                        Real band_fraction = 0.5) const;

 private:
  struct Shape;
  const Shape& shape(const JetParams& jp, int xi_idx, const Grid& g,
                     Real band_fraction) const;

  DirectionSet dirs_;
  Profile1D phi_, psi_, dpsi_;
  Real int_phi_sq_ = 0, int_dpsi_sq_ = 0;
  Real c_g_ = 1.0;                  // normalizer of G
  std::vector<Real> cum_g1_, cum_g2_;  // cumulative int G and int G^2 on [0,1]
  Real cum_dx_ = 0;

  mutable std::mutex cache_mu_;
  mutable std::map<std::tuple<int, int, int, int, int, int>,
                   std::shared_ptr<Shape>>
      shape_cache_;

  Real cum_eval(const std::vector<Real>& table, Real w) const;
};

struct JetIdentityReport {
  Real residual_grad_identity = 0;   // sigma^{-1} grad-perp Psi = W + W^c
  Real residual_transport_w = 0;     // d_t |W|^2 xi = sigma^{-1} theta g div(W (x) W)
  Real residual_transport_psi = 0;   // d_t Psi = sigma^{-1} theta g (xi . grad) Psi
  Real normalization_gap = 0;        // |mean(W (x) W) - xi (x) xi|_F
  Real c_gap = 0;                    // |c_disc - c_cont| / c_cont
  Real truncation = 0;               // band-limited vs exact profile samples
  Real mean_w = 0;
};

JetIdentityReport jet_identity_checks(const JetSystem& js, const JetParams& jp,
                                      int xi_idx, const std::vector<Real>& t_sweep,
                                      const Grid& g, Real dt_fd,
                                      Real band_fraction = 0.5);

/// Measured (2.4)-type table: ||grad^N W||_{L^p} / ((sigma mu)^N (nu mu)^{1/2-1/p}).
struct JetScalingRow {
  int n_deriv = 0;
  Real p = 2;
  Real normalized = 0;
};
std::vector<JetScalingRow> jet_scaling_table(const JetSystem& js,
                                             const JetParams& jp, int xi_idx,
                                             const Grid& g);

}  // namespace ci2d

#endif  // CI2D_JETS_HPP
