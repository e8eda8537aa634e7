#include "ci2d/iteration.hpp"

#include <cmath>
#include <stdexcept>

namespace ci2d {

namespace {

Real bump01(Real s) {  // bump on (0,1)
  Real u = 2.0 * s - 1.0;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

Real bump01_deriv(Real s) {
  Real u = 2.0 * s - 1.0;
  if (std::abs(u) >= 1.0) return 0.0;
  Real d = 1.0 - u * u;
  return 2.0 * std::exp(-1.0 / d) * (-2.0 * u) / (d * d);
}

Real smoothstep5(Real u) {  // C^2 step
  if (u <= 0) return 0.0;
  if (u >= 1) return 1.0;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

Real smoothstep5_deriv(Real u) {
  if (u <= 0 || u >= 1) return 0.0;
  return 30.0 * u * u * (1.0 - u) * (1.0 - u);
}

struct MollifierWeights {
  std::vector<Real> w;   // kernel, sums to 1
  std::vector<Real> dw;  // derivative kernel, sums to 0
};

MollifierWeights mollifier_weights(Real ell, Real dt) {
  int j_max = static_cast<int>(std::floor(ell / dt));
  if (j_max < 1)
    throw std::invalid_argument("mollify: time grid coarser than ell");
  MollifierWeights mw;
  mw.w.resize(static_cast<size_t>(j_max) + 1);
  mw.dw.resize(static_cast<size_t>(j_max) + 1);
  Real sum = 0;
  for (int j = 0; j <= j_max; ++j) {
    Real s = j * dt / ell;
    mw.w[static_cast<size_t>(j)] = bump01(s) * dt / ell;
    mw.dw[static_cast<size_t>(j)] = bump01_deriv(s) * dt / (ell * ell);
    sum += mw.w[static_cast<size_t>(j)];
  }
  Real dsum = 0;
  for (auto& v : mw.w) v /= sum;
  for (auto v : mw.dw) dsum += v;
  for (auto& v : mw.dw) v -= dsum / static_cast<Real>(mw.dw.size());
  // The derivative kernel is normalized against a linear ramp so that
  // d_t of a linear-in-time series is reproduced exactly.
  Real ramp = 0;
  for (size_t j = 0; j < mw.dw.size(); ++j)
    ramp += mw.dw[j] * (-static_cast<Real>(j) * dt);
  if (std::abs(ramp) > 1e-14)
    for (auto& v : mw.dw) v /= ramp;
  return mw;
}

std::function<Complex(int, int)> spatial_mollifier(Real ell) {
  return [ell](int k1, int k2) {
    return Complex(mollifier_symbol(ell, k1, k2), 0.0);
  };
}

}  // namespace

// ---- construction ----------------------------------------------------------

ConvexIntegrator::ConvexIntegrator(IterationParams params, IterationConfig config,
                                   const VectorField& u0)
    : params_(std::move(params)), config_(std::move(config)), u0_(u0) {
  params_.validate();
  Grid g(config_.grid_n);
  require_same_grid(u0.grid, g);
  u0_ = zero_nyquist(u0_);
  if (norm_linf(divergence(u0_)) > 1e-10)
    throw std::invalid_argument("init: u0 must be divergence-free");
  if (norm_lp(u0_, params_.p) > params_.data_n)
    throw std::invalid_argument("init: ||u0||_{L^p} exceeds N");

  const Real dt = config_.dt;
  if (std::abs(std::lround(1.0 / dt) * dt - 1.0) > 1e-12)
    throw std::invalid_argument("init: 1/dt must be an integer so t=0 is on the grid");

  // Noise path on [0, L], then the stopping time fixes the horizon.
  NoiseConfig ncfg;
  ncfg.seed = config_.seed;
  ncfg.grid_n = config_.grid_n;
  ncfg.mode_cutoff = config_.noise_cutoff;
  ncfg.dt = dt;
  ncfg.mollifier_eps = config_.noise_eps;
  if (config_.noise_enabled) {
    path_ = sample_z(ncfg, params_.level_l);
    wick_square(path_);
    StoppingParams sp;
    sp.level_l = params_.level_l;
    sp.kappa = params_.kappa;
    sp.p = params_.p;
    path_.stopping = stopping_time(path_, sp);
    t_l_ = path_.stopping->t_l;
  } else {
    path_.cfg = ncfg;
    int steps = static_cast<int>(std::lround(params_.level_l / dt));
    path_.z = VectorSeries(0.0, dt);
    path_.z_eps = VectorSeries(0.0, dt);
    path_.wick = SymTensorSeries(0.0, dt);
    for (int i = 0; i <= steps; ++i) {
      path_.z.values.push_back(VectorField(g));
      path_.z_eps.values.push_back(VectorField(g));
      path_.wick.values.push_back(SymTensorField(g));
      path_.renorm_c.push_back(Mat2::Zero());
    }
    path_.stopping = StoppingTimes{params_.level_l, params_.level_l,
                                   params_.level_l, params_.level_l};
    t_l_ = params_.level_l;
  }

  i_zero_ = static_cast<int>(std::lround(-config_.t_min / dt));
  n_steps_ = i_zero_ + static_cast<int>(std::lround(t_l_ / dt));

  z_in_ = VectorSeries(config_.t_min, dt);
  z_in_.values.reserve(static_cast<size_t>(n_steps_) + 1);
  for (int i = 0; i <= n_steps_; ++i)
    z_in_.values.push_back(heat_semigroup(u0_, std::abs(time_of(i))));

  DirectionSet ds = build_direction_set(config_.jet_directions, config_.jet_mu0);
  jets_ = std::make_unique<JetSystem>(ds);

  // Delta_{>R} z vanishes identically when the noise band sits below the
  // first annulus above the cutoff; detect once and skip those paraproducts.
  z_high_vanishes_ = true;
  Real first_annulus = 0.75 * std::ldexp(1.0, params_.cutoff_r + 1);
  if (config_.noise_enabled &&
      std::sqrt(2.0) * config_.noise_cutoff >= first_annulus)
    z_high_vanishes_ = false;
}

int ConvexIntegrator::index_of(Real t) const {
  int i = static_cast<int>(std::lround((t - config_.t_min) / config_.dt));
  if (i < 0 || i > n_steps_) throw std::out_of_range("time outside grid");
  return i;
}

VectorField ConvexIntegrator::zero_nyquist(const VectorField& v) const {
  VectorField out = v;
  const Grid& g = v.grid;
  int ny = g.index(-g.nyquist());
  for (int c = 0; c < 2; ++c) {
    out.comp[static_cast<size_t>(c)].row(ny).setZero();
    out.comp[static_cast<size_t>(c)].col(ny).setZero();
  }
  return out;
}

VectorField ConvexIntegrator::z_at(int i) const {
  if (i <= i_zero_) return VectorField(Grid(config_.grid_n));
  return path_.z.at(i - i_zero_);
}

VectorField ConvexIntegrator::z_low(int i) const {
  return localize(z_at(i), params_.cutoff_r, LocalizeSide::kAtMost);
}

VectorField ConvexIntegrator::z_high(int i) const {
  return localize(z_at(i), params_.cutoff_r, LocalizeSide::kAbove);
}

VectorField ConvexIntegrator::z_fq(int i, int q) const {
  return localize(z_high(i), params_.f_q(q), LocalizeSide::kAtMost);
}

SymTensorField ConvexIntegrator::wick_at(int i) const {
  if (i <= i_zero_) return SymTensorField(Grid(config_.grid_n));
  return path_.wick.at(i - i_zero_);
}

// ---- v1 fixed point --------------------------------------------------------

VectorSeries ConvexIntegrator::solve_v1(int q, const VectorSeries& v2,
                                        SolveV1Log* log) const {
  const Grid g(config_.grid_n);
  const Real dt = config_.dt;
  VectorSeries v1(config_.t_min, dt);
  v1.values.assign(static_cast<size_t>(n_steps_) + 1, VectorField(g));

  bool para_active = !z_high_vanishes_ && params_.f_q(q) > params_.cutoff_r;
  SolveV1Log local;
  const int max_iter = 100;
  for (int iter = 0; iter < max_iter; ++iter) {
    VectorSeries next(config_.t_min, dt);
    next.values.assign(static_cast<size_t>(n_steps_) + 1, VectorField(g));
    // Exact linear propagation with the forcing held constant per step.
    for (int i = i_zero_; i < n_steps_; ++i) {
      VectorField force(g);
      {
        SymTensorField flux = wick_at(i);
        force = divergence(flux);
        if (para_active) {
          VectorField u = v1.at(i) + v2.at(i) + z_in_.at(i);
          VectorField zf = z_fq(i, q);
          Tensor2Field tp = tensor_paraproduct(u, zf, ParaKind::kLo) +
                            tensor_paraproduct(zf, u, ParaKind::kHi);
          force = force + divergence(tp);
        }
        force = helmholtz_project(force);
      }
      for (int c = 0; c < 2; ++c) {
        for (int a = 0; a < g.n; ++a) {
          Real k1 = g.mode(a);
          for (int b = 0; b < g.n; ++b) {
            Real k2 = g.mode(b);
            Real lam = 4.0 * kPi * kPi * (k1 * k1 + k2 * k2);
            Real decay = std::exp(-lam * dt);
            Real w = lam == 0 ? dt : (1.0 - decay) / lam;
            next.at(i + 1).comp[static_cast<size_t>(c)](a, b) =
                decay * next.at(i).comp[static_cast<size_t>(c)](a, b) -
                w * force.comp[static_cast<size_t>(c)](a, b);
          }
        }
      }
    }
    Real delta = 0;
    for (int i = 0; i <= n_steps_; ++i)
      delta = std::max(delta, norm_lp(next.at(i) - v1.at(i), 2.0));
    v1 = std::move(next);
    local.iterations = iter + 1;
    local.increments.push_back(delta);
    if (delta < 1e-9) {
      local.converged = true;
      break;
    }
    if (!para_active && iter >= 1) {
      local.converged = true;
      break;
    }
  }
  if (local.increments.size() >= 2) {
    Real a = local.increments[local.increments.size() - 2];
    Real b = local.increments.back();
    local.contraction_ratio = a > 0 ? b / a : 0.0;
  }
  if (!local.converged)
    throw std::runtime_error("solve_v1: no convergence in 100 iterations, ratio " +
                             std::to_string(local.contraction_ratio));
  if (log) *log = local;
  return v1;
}

// ---- mollification ---------------------------------------------------------

MollifiedLevel ConvexIntegrator::mollify_step(const IterationState& s) const {
  const Real ell = params_.ell(s.q);
  if (ell > std::sqrt(params_.delta(s.q + 1)) + 1e-12) {
    // flagged, not fatal at desk scale
  }
  MollifierWeights mw = mollifier_weights(ell, config_.dt);
  auto sym = spatial_mollifier(ell);

  MollifiedLevel ml;
  ml.v_ell = VectorSeries(config_.t_min, config_.dt);
  ml.r_ell = SymTensorSeries(config_.t_min, config_.dt);
  ml.dt_r_ell = SymTensorSeries(config_.t_min, config_.dt);
  const Grid g(config_.grid_n);
  for (int i = 0; i <= n_steps_; ++i) {
    VectorField v(g);
    SymTensorField r(g), dr(g);
    for (size_t j = 0; j < mw.w.size(); ++j) {
      int src = std::max(0, i - static_cast<int>(j));
      for (int c = 0; c < 2; ++c)
        v.comp[static_cast<size_t>(c)] +=
            mw.w[j] * s.v2.at(src).comp[static_cast<size_t>(c)];
      for (int c = 0; c < 3; ++c) {
        r.comp[static_cast<size_t>(c)] +=
            mw.w[j] * s.stress.at(src).comp[static_cast<size_t>(c)];
        dr.comp[static_cast<size_t>(c)] +=
            mw.dw[j] * s.stress.at(src).comp[static_cast<size_t>(c)];
      }
    }
    ml.v_ell.values.push_back(multiplied(v, sym));
    ml.r_ell.values.push_back(multiplied(r, sym));
    ml.dt_r_ell.values.push_back(multiplied(dr, sym));
  }
  return ml;
}

// ---- amplitudes -------------------------------------------------------------

AmplitudeSlice ConvexIntegrator::amplitudes(const SymTensorField& r_ell,
                                            const SymTensorField& dt_r_ell,
                                            int q_next) const {
  const Real ell = params_.ell(q_next - 1);
  const Real gq = params_.gamma_q(q_next);
  if (gq <= 0) throw std::invalid_argument("amplitudes: gamma_{q+1} must be positive");
  const Grid g(config_.grid_n);
  const int n = g.n;
  auto rs = to_physical(r_ell);
  auto drs = to_physical(dt_r_ell);
  const DirectionSet& ds = jets_->directions();
  const int m = ds.count();

  AmplitudeSlice out;
  out.rho.resize(n, n);
  out.a.assign(static_cast<size_t>(m), ArrayXXr(n, n));
  out.a_sq.assign(static_cast<size_t>(m), ArrayXXr(n, n));
  out.dt_a_sq.assign(static_cast<size_t>(m), ArrayXXr(n, n));

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Mat2 r;
      r << rs[0](i, j), rs[1](i, j), rs[1](i, j), rs[2](i, j);
      Mat2 dr;
      dr << drs[0](i, j), drs[1](i, j), drs[1](i, j), drs[2](i, j);
      Real fro2 = r(0, 0) * r(0, 0) + 2.0 * r(0, 1) * r(0, 1) + r(1, 1) * r(1, 1);
      Real root = std::sqrt(ell * ell + fro2);
      Real rho = 2.0 * root + gq;
      Real dt_rho =
          2.0 *
          (r(0, 0) * dr(0, 0) + 2.0 * r(0, 1) * dr(0, 1) + r(1, 1) * dr(1, 1)) /
          root;
      out.rho(i, j) = rho;
      out.domain_margin = std::max(out.domain_margin, std::sqrt(fro2) / rho);

      Mat2 arg = Mat2::Identity() - r / rho;
      std::vector<Real> w = ds.gamma_sq(arg);
      std::vector<Eigen::Vector3d> gw = ds.gamma_sq_gradient(arg);
      // d(arg)/dt = -dr/rho + r dt_rho / rho^2, componentwise (r11, r12, r22).
      Eigen::Vector3d darg(-dr(0, 0) / rho + r(0, 0) * dt_rho / (rho * rho),
                           -dr(0, 1) / rho + r(0, 1) * dt_rho / (rho * rho),
                           -dr(1, 1) / rho + r(1, 1) * dt_rho / (rho * rho));
      Mat2 rec = Mat2::Zero();
      for (int d = 0; d < m; ++d) {
        Real wa = w[static_cast<size_t>(d)];
        out.a_sq[static_cast<size_t>(d)](i, j) = rho * wa;
        out.a[static_cast<size_t>(d)](i, j) = std::sqrt(rho * wa);
        out.dt_a_sq[static_cast<size_t>(d)](i, j) =
            dt_rho * wa + rho * gw[static_cast<size_t>(d)].dot(darg);
        const Vec2& xi = ds.entries[static_cast<size_t>(d)].xi;
        rec += rho * wa * (xi * xi.transpose());
      }
      Mat2 target = rho * Mat2::Identity() - r;
      out.reconstruction_error =
          std::max(out.reconstruction_error, (rec - target).cwiseAbs().maxCoeff());
    }
  }
  if (out.domain_margin > 0.5 + 1e-12)
    throw std::runtime_error("amplitudes: |R_ell|/rho exceeded 1/2 (gamma too small)");
  return out;
}

Real ConvexIntegrator::chi(Real t, int q_next) const {
  Real s = params_.sigma_q(q_next);
  return smoothstep5((t - s) / s);
}

Real ConvexIntegrator::chi_prime(Real t, int q_next) const {
  Real s = params_.sigma_q(q_next);
  return smoothstep5_deriv((t - s) / s) / s;
}

// ---- perturbation -----------------------------------------------------------

ConvexIntegrator::PerturbationSlice ConvexIntegrator::perturbation(
    const IterationState& s, const MollifiedLevel& ml, const AmplitudeSlice& amp,
    int i, int q_next, std::map<std::string, Real>* track) const {
  (void)s;
  const Grid g(config_.grid_n);
  const Real t = time_of(i);
  const JetParams jp = params_.jet_params(q_next, jets_->directions().mu0);
  const DirectionSet& ds = jets_->directions();
  const int m = ds.count();
  const Real sig = jp.sigma, theta = jp.theta;
  Real band_fraction =
      std::min(0.5, static_cast<Real>(config_.jet_band_cap * jp.sigma) /
                        (g.nyquist() - 1));

  PerturbationSlice out{VectorField(g), VectorField(g), VectorField(g),
                        VectorField(g), VectorField(g)};

  std::vector<ScalarField> a_f(static_cast<size_t>(m), ScalarField(g));
  std::vector<ScalarField> a2_f(static_cast<size_t>(m), ScalarField(g));
  for (int d = 0; d < m; ++d) {
    a_f[static_cast<size_t>(d)] = to_spectral(g, amp.a[static_cast<size_t>(d)]);
    a2_f[static_cast<size_t>(d)] = to_spectral(g, amp.a_sq[static_cast<size_t>(d)]);
  }

  VectorField wo_raw(g), wa_raw(g);
  for (int d = 0; d < m; ++d) {
    auto osc = jets_->oscillators(jp, d, t);
    const Vec2& xi = ds.entries[static_cast<size_t>(d)].xi;
    // h-weighted oscillation corrector source: div(a^2 xi (x) xi).
    ScalarField dir_da2(g);
    dir_da2.coef = xi.x() * derivative(a2_f[static_cast<size_t>(d)], 1, 1).coef +
                   xi.y() * derivative(a2_f[static_cast<size_t>(d)], 2, 1).coef;
    wo_raw.comp[0] += osc.h * dir_da2.coef * xi.x();
    wo_raw.comp[1] += osc.h * dir_da2.coef * xi.y();
    if (osc.g == 0.0 && osc.dg == 0.0) continue;

    JetFieldSet jf = jets_->fields(jp, d, t, g, band_fraction);
    VectorField aW = multiply(a_f[static_cast<size_t>(d)], jf.w);
    VectorField aWc = multiply(a_f[static_cast<size_t>(d)], jf.w_corr);
    VectorField gradA = perp_gradient(a_f[static_cast<size_t>(d)]);
    VectorField psiGrad = multiply(jf.psi, gradA);
    out.wp = out.wp + osc.g * aW;
    out.wc = out.wc + osc.g * aWc + (osc.g / sig) * psiGrad;
    ScalarField w2 = dot(jf.w, jf.w);
    ScalarField a2w2 = multiply(a2_f[static_cast<size_t>(d)], w2);
    wa_raw.comp[0] += osc.g * a2w2.coef * xi.x();
    wa_raw.comp[1] += osc.g * a2w2.coef * xi.y();
  }
  out.wo = (-1.0 / sig) * helmholtz_project(remove_mean(wo_raw));
  out.wa = (-sig / theta) * helmholtz_project(remove_mean(wa_raw));

  Real c = chi(t, q_next);
  out.w_total = c * (out.wp + out.wc) + (c * c) * (out.wo + out.wa);

  if (track && config_.track_identities && c > 0) {
    // (wp+wc) identity against sigma^{-1} sum grad-perp(a g Psi).
    VectorField rhs(g);
    for (int d = 0; d < m; ++d) {
      auto osc = jets_->oscillators(jp, d, t);
      if (osc.g == 0.0) continue;
      JetFieldSet jf = jets_->fields(jp, d, t, g, band_fraction);
      ScalarField aPsi = multiply(a_f[static_cast<size_t>(d)], jf.psi);
      rhs = rhs + (osc.g / sig) * perp_gradient(aPsi);
    }
    Real r = norm_linf((out.wp + out.wc) - rhs);
    auto& v = (*track)["identity_wp_wc"];
    v = std::max(v, r);

    // (4.10) pointwise: wp (x) wp + R_ell against the oscillation split.
    auto rls = to_physical(ml.r_ell.at(i));
    ArrayXXr lhs11 = rls[0], lhs12 = rls[1], lhs22 = rls[2];
    ArrayXXr rhs11 = amp.rho, rhs12 = ArrayXXr::Zero(g.n, g.n), rhs22 = amp.rho;
    ArrayXXr wp1 = ArrayXXr::Zero(g.n, g.n), wp2 = ArrayXXr::Zero(g.n, g.n);
    for (int d = 0; d < m; ++d) {
      auto osc = jets_->oscillators(jp, d, t);
      const Vec2& xi = ds.entries[static_cast<size_t>(d)].xi;
      const auto& a2 = amp.a_sq[static_cast<size_t>(d)];
      Real gsm1 = osc.g * osc.g - 1.0;
      rhs11 += a2 * gsm1 * xi.x() * xi.x();
      rhs12 += a2 * gsm1 * xi.x() * xi.y();
      rhs22 += a2 * gsm1 * xi.y() * xi.y();
      if (osc.g == 0.0) continue;
      JetFieldSet jf = jets_->fields(jp, d, t, g, band_fraction);
      auto ws = to_physical(jf.w);
      ArrayXXr ww11 = ws[0] * ws[0], ww12 = ws[0] * ws[1], ww22 = ws[1] * ws[1];
      Real g2 = osc.g * osc.g;
      rhs11 += a2 * g2 * (ww11 - ww11.mean());
      rhs12 += a2 * g2 * (ww12 - ww12.mean());
      rhs22 += a2 * g2 * (ww22 - ww22.mean());
      const auto& a = amp.a[static_cast<size_t>(d)];
      wp1 += osc.g * a * ws[0];
      wp2 += osc.g * a * ws[1];
    }
    lhs11 += wp1 * wp1;
    lhs12 += wp1 * wp2;
    lhs22 += wp2 * wp2;
    Real r410 = std::max({(lhs11 - rhs11).abs().maxCoeff(),
                          (lhs12 - rhs12).abs().maxCoeff(),
                          (lhs22 - rhs22).abs().maxCoeff()});
    auto& v410 = (*track)["identity_4_10"];
    v410 = std::max(v410, r410);
    out.identity_4_10 = r410;
  }
  return out;
}

// ---- flux and stress ---------------------------------------------------------

SymTensorField ConvexIntegrator::flux_q(const VectorField& v1t,
                                        const VectorField& v2t, int i) const {
  VectorField u = v1t + v2t + z_in_.at(i);
  SymTensorField f = outer_sym(u);
  if (config_.noise_enabled && i > i_zero_) {
    f = f + outer_symmetrized(u, z_low(i));
    if (!z_high_vanishes_) {
      Tensor2Field tp = tensor_paraproduct(u, z_high(i), ParaKind::kHiRes);
      f = f + 2.0 * symmetric_part(tp);
    }
  }
  return f;
}

SymTensorField ConvexIntegrator::n_com(const IterationState& s, int i) const {
  return flux_q(s.v1.at(i), s.v2.at(i), i);
}

// ---- init -------------------------------------------------------------------

IterationState ConvexIntegrator::init_state() {
  const Grid g(config_.grid_n);
  IterationState st;
  st.q = 0;
  st.t_l = t_l_;
  st.v2 = VectorSeries(config_.t_min, config_.dt);
  st.v2.values.assign(static_cast<size_t>(n_steps_) + 1, VectorField(g));
  SolveV1Log log;
  st.v1 = solve_v1(0, st.v2, &log);
  st.stress = SymTensorSeries(config_.t_min, config_.dt);
  st.stress.values.reserve(static_cast<size_t>(n_steps_) + 1);
  for (int i = 0; i <= n_steps_; ++i) {
    if (time_of(i) < 0) {
      st.stress.values.push_back(traceless(outer_sym(z_in_.at(i))));
    } else {
      st.stress.values.push_back(traceless(flux_q(st.v1.at(i), st.v2.at(i), i)));
    }
  }
  st.diag.q = 0;
  st.diag.values["v1_picard_iters"] = log.iterations;
  st.diag.values["v1_contraction"] = log.contraction_ratio;
  return st;
}

// ---- advance ----------------------------------------------------------------

IterationState ConvexIntegrator::advance(const IterationState& s) {
  const Grid g(config_.grid_n);
  const int qn = s.q + 1;
  const JetParams jp = params_.jet_params(qn, jets_->directions().mu0);
  const DirectionSet& ds = jets_->directions();
  const int m = ds.count();
  const Real sig = jp.sigma, theta = jp.theta;
  const Real ell = params_.ell(s.q);
  Real band_fraction =
      std::min(0.5, static_cast<Real>(config_.jet_band_cap * jp.sigma) /
                        (g.nyquist() - 1));

  MollifiedLevel ml = mollify_step(s);
  std::map<std::string, Real> track;

  // Pass 1: the new velocity v2_{q+1} = v_ell + w_{q+1}.
  IterationState next;
  next.q = qn;
  next.t_l = t_l_;
  next.v2 = VectorSeries(config_.t_min, config_.dt);
  next.v2.values.assign(static_cast<size_t>(n_steps_) + 1, VectorField(g));
  std::vector<AmplitudeSlice> amps(static_cast<size_t>(n_steps_) + 1);
  for (int i = 0; i <= n_steps_; ++i) {
    if (time_of(i) < 0) continue;  // extension: v2 = 0 before time zero
    amps[static_cast<size_t>(i)] =
        amplitudes(ml.r_ell.at(i), ml.dt_r_ell.at(i), qn);
    PerturbationSlice ps =
        perturbation(s, ml, amps[static_cast<size_t>(i)], i, qn, &track);
    next.v2.at(i) = ml.v_ell.at(i) + ps.w_total;
  }

  SolveV1Log v1log;
  next.v1 = solve_v1(qn, next.v2, &v1log);

  // Mollification data of the commutator N_com (time window + multiplier).
  MollifierWeights mw = mollifier_weights(ell, config_.dt);
  auto sym = spatial_mollifier(ell);
  std::vector<SymTensorField> ncom(static_cast<size_t>(n_steps_) + 1,
                                   SymTensorField(g));
  for (int i = 0; i <= n_steps_; ++i) ncom[static_cast<size_t>(i)] = n_com(s, i);

  // Pass 2: the Reynolds stress of the new level.
  next.stress = SymTensorSeries(config_.t_min, config_.dt);
  next.stress.values.assign(static_cast<size_t>(n_steps_) + 1, SymTensorField(g));
  Real sup_div = 0, sup_zero_window = 0;
  for (int i = 0; i <= n_steps_; ++i) {
    Real t = time_of(i);
    if (t < 0) {
      next.stress.at(i) = traceless(outer_sym(z_in_.at(i)));
      continue;
    }
    const AmplitudeSlice& amp = amps[static_cast<size_t>(i)];
    PerturbationSlice ps = perturbation(s, ml, amp, i, qn, nullptr);
    Real c = chi(t, qn), cp = chi_prime(t, qn);
    VectorField w = ps.w_total;
    VectorField wtp = c * ps.wp;
    VectorField wtc = c * ps.wc;
    VectorField wtt = (c * c) * (ps.wo + ps.wa);
    VectorField vl1 = ml.v_ell.at(i) + next.v1.at(i);

    // R_lin
    VectorField d1w = derivative(w, 1, 1), d2w = derivative(w, 2, 1);
    SymTensorField gradsym(g);
    gradsym.comp[0] = 2.0 * d1w.comp[0];
    gradsym.comp[1] = d1w.comp[1] + d2w.comp[0];
    gradsym.comp[2] = 2.0 * d2w.comp[1];
    VectorField dt_wpc(g);
    {
      std::vector<ScalarField> a_f(static_cast<size_t>(m), ScalarField(g));
      for (int d = 0; d < m; ++d)
        a_f[static_cast<size_t>(d)] = to_spectral(g, amp.a[static_cast<size_t>(d)]);
      for (int d = 0; d < m; ++d) {
        auto osc = jets_->oscillators(jp, d, t);
        if (osc.g == 0.0 && osc.dg == 0.0) continue;
        JetFieldSet jf = jets_->fields(jp, d, t, g, band_fraction);
        // d_t(a g) = (d_t a) g + a dg with d_t a = d_t(a^2)/(2a).
        ArrayXXr dta = amp.dt_a_sq[static_cast<size_t>(d)] /
                       (2.0 * amp.a[static_cast<size_t>(d)]);
        ScalarField dtag = to_spectral(
            g, ArrayXXr(dta * osc.g + amp.a[static_cast<size_t>(d)] * osc.dg));
        ScalarField term1 = multiply(dtag, jf.psi);
        const Vec2& xi = ds.entries[static_cast<size_t>(d)].xi;
        ScalarField xigradpsi(g);
        xigradpsi.coef = xi.x() * derivative(jf.psi, 1, 1).coef +
                         xi.y() * derivative(jf.psi, 2, 1).coef;
        ScalarField term2 = multiply(a_f[static_cast<size_t>(d)], xigradpsi);
        ScalarField total(g);
        total.coef = (1.0 / sig) * term1.coef +
                     (theta / (sig * sig)) * (osc.g * osc.g) * term2.coef;
        dt_wpc = dt_wpc + perp_gradient(total);
      }
      dt_wpc = c * dt_wpc + cp * (ps.wp + ps.wc);
    }
    SymTensorField r_lin = (-1.0) * gradsym + antidiv(dt_wpc) +
                           traceless(outer_symmetrized(vl1, w));

    // R_cor
    VectorField wct = wtc + wtt;
    SymTensorField r_cor =
        traceless(outer_sym(wct) + outer_symmetrized(wct, wtp));

    // R_osc
    SymTensorField r_osc(g);
    {
      SymTensorField acc(g);
      for (int d = 0; d < m; ++d) {
        auto osc = jets_->oscillators(jp, d, t);
        const Vec2& xi = ds.entries[static_cast<size_t>(d)].xi;
        ScalarField dta2 = to_spectral(g, amp.dt_a_sq[static_cast<size_t>(d)]);
        // R_osc,t: -sigma^{-1} R(h div d_t(a^2 xi (x) xi))
        ScalarField dirdta2(g);
        dirdta2.coef = xi.x() * derivative(dta2, 1, 1).coef +
                       xi.y() * derivative(dta2, 2, 1).coef;
        VectorField src(g);
        src.comp[0] = dirdta2.coef * xi.x();
        src.comp[1] = dirdta2.coef * xi.y();
        acc = acc + (-1.0 / sig) * osc.h * antidiv(src);
        if (osc.g == 0.0 && osc.dg == 0.0) continue;
        JetFieldSet jf = jets_->fields(jp, d, t, g, band_fraction);
        ScalarField a2_f = to_spectral(g, amp.a_sq[static_cast<size_t>(d)]);
        // R_osc,x: g^2 B(grad a^2, P_neq0(W (x) W))
        SymTensorField ww = remove_mean(outer_sym(jf.w));
        acc = acc + (osc.g * osc.g) *
                        bilinear_antidiv(gradient(a2_f), ww);
        // R_osc,a: -theta^{-1} sigma B(d_t(a^2 g), |W|^2 xi)
        ArrayXXr dta2g = amp.dt_a_sq[static_cast<size_t>(d)] * osc.g +
                         amp.a_sq[static_cast<size_t>(d)] * osc.dg;
        ScalarField dta2g_f = to_spectral(g, dta2g);
        ScalarField w2 = dot(jf.w, jf.w);
        VectorField w2xi(g);
        w2xi.comp[0] = w2.coef * xi.x();
        w2xi.comp[1] = w2.coef * xi.y();
        acc = acc + (-sig / theta) * bilinear_antidiv(dta2g_f, w2xi);
      }
      r_osc = (c * c) * acc + (2.0 * c * cp) * antidiv(ps.wo + ps.wa) +
              (1.0 - c * c) * ml.r_ell.at(i);
    }

    // R_com: mollification commutator of the level-q flux.
    SymTensorField r_com(g);
    {
      SymTensorField mc(g);
      for (size_t j = 0; j < mw.w.size(); ++j) {
        int src = std::max(0, i - static_cast<int>(j));
        for (int cc = 0; cc < 3; ++cc)
          mc.comp[static_cast<size_t>(cc)] +=
              mw.w[j] * ncom[static_cast<size_t>(src)].comp[static_cast<size_t>(cc)];
      }
      r_com = traceless(ncom[static_cast<size_t>(i)] - multiplied(mc, sym));
    }

    // R_com1, R_com2, R_com3
    VectorField dv = (next.v1.at(i) + next.v2.at(i)) - (s.v1.at(i) + s.v2.at(i));
    SymTensorField r_com1(g);
    if (config_.noise_enabled && i > i_zero_) {
      r_com1 = outer_symmetrized(dv, z_low(i));
      if (!z_high_vanishes_) {
        Tensor2Field tp = tensor_paraproduct(dv, z_high(i), ParaKind::kHiRes);
        r_com1 = r_com1 + 2.0 * symmetric_part(tp);
      }
      r_com1 = traceless(r_com1);
    }
    SymTensorField r_com2 = traceless(
        outer_sym(vl1) - outer_sym(s.v1.at(i) + s.v2.at(i)));
    SymTensorField r_com3 = traceless(outer_symmetrized(dv, z_in_.at(i)));

    next.stress.at(i) =
        r_lin + r_cor + r_osc + r_com + r_com1 + r_com2 + r_com3;

    if (config_.track_identities) {
      sup_div = std::max({sup_div, norm_linf(divergence(next.v2.at(i))),
                          norm_linf(divergence(next.v1.at(i))),
                          norm_linf(divergence(w))});
      if (t <= params_.sigma_q(qn) && t >= params_.t_q(qn))
        sup_zero_window = std::max(sup_zero_window, norm_linf(next.v2.at(i)));
    }
  }

  next.diag = diagnostics(s, next);
  next.diag.values["v1_picard_iters"] = v1log.iterations;
  next.diag.values["v1_contraction"] = v1log.contraction_ratio;
  for (const auto& [k, v] : track) next.diag.values[k] = v;
  next.diag.values["sup_divergence"] = sup_div;
  next.diag.values["v2_zero_window_sup"] = sup_zero_window;
  Real worst_amp = 0, worst_rec = 0;
  for (int i = 0; i <= n_steps_; ++i) {
    if (time_of(i) < 0) continue;
    worst_amp = std::max(worst_amp, amps[static_cast<size_t>(i)].domain_margin);
    worst_rec =
        std::max(worst_rec, amps[static_cast<size_t>(i)].reconstruction_error);
  }
  next.diag.values["amplitude_domain_margin"] = worst_amp;
  next.diag.values["amplitude_reconstruction"] = worst_rec;
  if (config_.track_residual)
    next.diag.values["master_residual"] = master_residual(next);
  return next;
}

std::vector<IterationState> ConvexIntegrator::iterate(int q_max) {
  if (q_max < 1) throw std::invalid_argument("iterate: q_max >= 1");
  std::vector<IterationState> states;
  states.push_back(init_state());
  for (int q = 0; q < q_max; ++q) states.push_back(advance(states.back()));
  return states;
}

// ---- residual and diagnostics ----------------------------------------------

Real ConvexIntegrator::master_residual(const IterationState& s) const {
  Real sup = 0;
  const Real dt = config_.dt;
  for (int i = 1; i < n_steps_; ++i) {
    VectorField dtv2 = (1.0 / (2.0 * dt)) * (s.v2.at(i + 1) - s.v2.at(i - 1));
    VectorField res = dtv2 - laplacian(s.v2.at(i)) +
                      divergence(flux_q(s.v1.at(i), s.v2.at(i), i)) -
                      divergence(s.stress.at(i));
    sup = std::max(sup, norm_hs(helmholtz_project(res), -2.0));
  }
  return sup;
}

namespace {

Real window_l2l2(const VectorSeries& v, Real dt, Real lo, Real hi) {
  Real acc = 0;
  for (int i = 0; i < v.steps(); ++i) {
    Real t = v.time(i);
    if (t > lo && t <= hi) {
      Real n = norm_lp(v.at(i), 2.0);
      acc += n * n * dt;
    }
  }
  return std::sqrt(acc);
}

Real window_l1l1(const SymTensorSeries& r, Real dt, Real lo, Real hi) {
  Real acc = 0;
  for (int i = 0; i < r.steps(); ++i) {
    Real t = r.time(i);
    if (t > lo && t <= hi) acc += norm_lp(r.at(i), 1.0) * dt;
  }
  return acc;
}

}  // namespace

LevelDiagnostics ConvexIntegrator::diagnostics(const IterationState& prev,
                                               const IterationState& next) const {
  LevelDiagnostics d;
  d.q = next.q;
  const Real dt = config_.dt;
  const Real tl = t_l_;
  const int q = next.q;
  const Real p = params_.p;

  d.values["t_l"] = tl;
  d.values["v2_l2l2"] = window_l2l2(next.v2, dt, 0.0, tl);
  d.values["v2_ctlp"] = 0;
  d.values["v2_c1tx"] = 0;
  for (int i = i_zero_; i <= n_steps_; ++i) {
    d.values["v2_ctlp"] =
        std::max(d.values["v2_ctlp"], norm_lp(next.v2.at(i), p));
    Real c1 = norm_cn(next.v2.at(i), 1);
    if (i > 0 && i < n_steps_) {
      VectorField dtv =
          (1.0 / (2.0 * dt)) * (next.v2.at(i + 1) - next.v2.at(i - 1));
      c1 += norm_linf(dtv);
    }
    d.values["v2_c1tx"] = std::max(d.values["v2_c1tx"], c1);
  }

  Real sig_prev = params_.sigma_q(q - 1);
  d.values["stress_l1l1_late"] =
      window_l1l1(next.stress, dt, std::min(sig_prev, tl), tl);
  d.values["stress_l1l1_full"] = window_l1l1(next.stress, dt, 0.0, tl);
  // Sliding-window growth exponent on [t_q, sigma_q ^ T_L].
  {
    Real lo = params_.t_q(q), hi = std::min(params_.sigma_q(q), tl);
    Real worst = 0;
    for (Real h : {8.0 * dt, 32.0 * dt, (hi - lo) / 2.0}) {
      if (h <= dt) continue;
      for (Real a = lo; a + h <= hi; a += h / 2.0) {
        Real val = window_l1l1(next.stress, dt, a, a + h);
        Real ref = 2.0 * (q + 1) * params_.big_a() *
                   std::pow(h / 2.0, 2.0 - 2.0 / p);
        if (ref > 0) worst = std::max(worst, val / ref);
      }
    }
    d.values["stress_window_ratio"] = worst;
  }

  // Increments against the previous level.
  Real inc_lp = 0, inc_w = 0;
  for (int i = i_zero_; i <= n_steps_; ++i) {
    VectorField diff = next.v2.at(i) - prev.v2.at(i);
    inc_lp = std::max(inc_lp, norm_lp(diff, p));
    inc_w = std::max(inc_w, norm_wsp(diff, 0.5, 6.0 / 5.0));
  }
  d.values["inc_ctlp"] = inc_lp;
  d.values["inc_w125_65"] = inc_w;
  {
    VectorSeries diff(config_.t_min, dt);
    diff.values.reserve(static_cast<size_t>(n_steps_) + 1);
    for (int i = 0; i <= n_steps_; ++i)
      diff.values.push_back(next.v2.at(i) - prev.v2.at(i));
    Real two_sig = 2.0 * params_.sigma_q(q - 2);
    d.values["inc_l2_late"] = window_l2l2(diff, dt, std::min(two_sig, tl), tl);
    d.values["inc_l2_mid"] =
        window_l2l2(diff, dt, std::min(params_.sigma_q(q), tl),
                    std::min(two_sig, tl));
  }

  // Energy bookkeeping of (3.17).
  {
    Real lo = std::min(2.0, tl);
    Real e_next = window_l2l2(next.v2, dt, lo, tl);
    Real e_prev = window_l2l2(prev.v2, dt, lo, tl);
    Real pumped = 2.0 * params_.gamma_q(q) * (tl - lo);
    d.values["energy_increment"] = e_next * e_next - e_prev * e_prev;
    d.values["energy_gap_317"] =
        std::abs(e_next * e_next - e_prev * e_prev - pumped);
    d.values["energy_pumped_target"] = pumped;
  }
  return d;
}

}  // namespace ci2d
