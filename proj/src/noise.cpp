#include "ci2d/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace ci2d {

void NoiseConfig::validate() const {
  if (dt <= 0) throw std::invalid_argument("NoiseConfig: dt must be positive");
  if (mode_cutoff > grid_n / 2 - 1)
    throw std::invalid_argument("NoiseConfig: cutoff exceeds N/2-1");
  if (mollifier_eps < 0)
    throw std::invalid_argument("NoiseConfig: eps must be nonnegative");
}

void StoppingParams::validate() const {
  if (level_l < 2) throw std::invalid_argument("StoppingParams: L >= 2 required");
  if (p <= 1 || p >= 2) throw std::invalid_argument("StoppingParams: p in (1,2)");
  if (kappa <= 0 || kappa >= kappa0())
    throw std::invalid_argument("StoppingParams: need 0 < kappa < kappa0");
}

Real mollifier_symbol(Real eps, Real k1, Real k2) {
  if (eps == 0) return 1.0;
  Real r = eps * std::hypot(k1, k2);
  if (r >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Real uniform01(uint64_t h) {
  return (static_cast<Real>(h >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

Real gaussian_increment(uint64_t seed, int k1, int k2, int comp, int step,
                        int which) {
  uint64_t h = seed;
  h = splitmix64(h ^ (static_cast<uint64_t>(static_cast<uint32_t>(k1)) << 32 |
                      static_cast<uint32_t>(k2)));
  h = splitmix64(h ^ (static_cast<uint64_t>(comp) << 40 |
                      static_cast<uint64_t>(static_cast<uint32_t>(step))));
  uint64_t h1 = splitmix64(h ^ 0x1234567855AA55AAull);
  uint64_t h2 = splitmix64(h1);
  Real u1 = uniform01(h1), u2 = uniform01(h2);
  Real r = std::sqrt(-2.0 * std::log(u1));
  Real ang = kTwoPi * u2;
  return which == 0 ? r * std::cos(ang) : r * std::sin(ang);
}

NoisePath sample_z(const NoiseConfig& cfg, Real t_final, int mutate_after) {
  cfg.validate();
  if (t_final <= 0) throw std::invalid_argument("sample_z: T must be positive");
  Grid g(cfg.grid_n);
  const int steps = static_cast<int>(std::lround(t_final / cfg.dt));
  NoisePath path;
  path.cfg = cfg;
  path.z = VectorSeries(0.0, cfg.dt);
  path.z.values.reserve(static_cast<size_t>(steps + 1));
  path.z.values.push_back(VectorField(g));  // z(0) = 0

  const int cut = cfg.mode_cutoff;
  VectorField cur(g);
  for (int s = 1; s <= steps; ++s) {
    uint64_t seed = (mutate_after >= 0 && s > mutate_after)
                        ? splitmix64(cfg.seed ^ 0xD00DFEEDCAFEBEEFull)
                        : cfg.seed;
    // Independent modes in a half-plane; conjugate mirror fills the rest.
    for (int k1 = -cut; k1 <= cut; ++k1) {
      for (int k2 = -cut; k2 <= cut; ++k2) {
        bool self = (k1 == 0 && k2 == 0);
        if (self && !cfg.include_zero_mode) continue;
        // Keep one representative per conjugate pair.
        if (k1 < 0 || (k1 == 0 && k2 < 0)) continue;
        Real kk = Real(k1) * k1 + Real(k2) * k2;
        Real lam = 4.0 * kPi * kPi * kk;
        Real decay = std::exp(-lam * cfg.dt);
        Real var = kk == 0 ? cfg.dt : (1.0 - decay * decay) / (2.0 * lam);
        Real sd = std::sqrt(var * 0.5);  // per real/imag part per component
        int a = g.index(k1), b = g.index(k2);
        int am = g.index(-k1), bm = g.index(-k2);
        for (int c = 0; c < 2; ++c) {
          Complex xi;
          if (self) {
            // Real coefficient: full variance on the real part.
            xi = Complex(std::sqrt(var) * gaussian_increment(seed, k1, k2, c, s, 0), 0.0);
          } else {
            xi = Complex(sd * gaussian_increment(seed, k1, k2, c, s, 0),
                         sd * gaussian_increment(seed, k1, k2, c, s, 1));
          }
          Complex next = decay * cur.comp[static_cast<size_t>(c)](a, b) + xi;
          cur.comp[static_cast<size_t>(c)](a, b) = next;
          if (!self) cur.comp[static_cast<size_t>(c)](am, bm) = std::conj(next);
        }
        // Leray projection of the pair.
        if (kk > 0) {
          Real kh1 = k1 / std::sqrt(kk), kh2 = k2 / std::sqrt(kk);
          Complex dotkv = kh1 * cur.comp[0](a, b) + kh2 * cur.comp[1](a, b);
          cur.comp[0](a, b) -= kh1 * dotkv;
          cur.comp[1](a, b) -= kh2 * dotkv;
          cur.comp[0](am, bm) = std::conj(cur.comp[0](a, b));
          cur.comp[1](am, bm) = std::conj(cur.comp[1](a, b));
        }
      }
    }
    path.z.values.push_back(cur);
  }
  return path;
}

Mat2 renorm_constant(const NoiseConfig& cfg, Real t) {
  if (t < 0) throw std::invalid_argument("renorm_constant: t >= 0 required");
  Mat2 c = Mat2::Zero();
  const int cut = cfg.mode_cutoff;
  for (int k1 = -cut; k1 <= cut; ++k1)
    for (int k2 = -cut; k2 <= cut; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      Real kk = Real(k1) * k1 + Real(k2) * k2;
      Real m = mollifier_symbol(cfg.mollifier_eps, k1, k2);
      Real v = m * m * (1.0 - std::exp(-8.0 * kPi * kPi * kk * t)) /
               (8.0 * kPi * kPi * kk);
      Real kh1 = k1 / std::sqrt(kk), kh2 = k2 / std::sqrt(kk);
      Mat2 proj;
      proj << 1.0 - kh1 * kh1, -kh1 * kh2, -kh1 * kh2, 1.0 - kh2 * kh2;
      c += v * proj;
    }
  return c;
}

void wick_square(NoisePath& path) {
  const NoiseConfig& cfg = path.cfg;
  Grid g(cfg.grid_n);
  path.z_eps = VectorSeries(path.z.t0, path.z.dt);
  path.wick = SymTensorSeries(path.z.t0, path.z.dt);
  path.renorm_c.clear();
  auto moll = [&](int k1, int k2) {
    return Complex(mollifier_symbol(cfg.mollifier_eps, k1, k2), 0.0);
  };
  for (int i = 0; i < path.z.steps(); ++i) {
    VectorField ze = multiplied(path.z.at(i), moll);
    Mat2 c = renorm_constant(cfg, path.z.time(i));
    SymTensorField w = outer_sym(ze);
    w.comp[0](0, 0) -= Complex(c(0, 0), 0);
    w.comp[1](0, 0) -= Complex(c(0, 1), 0);
    w.comp[2](0, 0) -= Complex(c(1, 1), 0);
    path.z_eps.values.push_back(std::move(ze));
    path.wick.values.push_back(std::move(w));
    path.renorm_c.push_back(c);
  }
}

namespace {

// Cache of per-time, per-block physical samples for Holder quotients.
struct BlockCache {
  int jmax = 0;
  // [time][block][component] physical samples
  std::vector<std::vector<std::array<ArrayXXr, 2>>> vec_blocks;
  std::vector<std::vector<std::array<ArrayXXr, 3>>> ten_blocks;
};

Real holder_quotient_norm(const std::vector<std::array<ArrayXXr, 2>>& bi,
                          const std::vector<std::array<ArrayXXr, 2>>& bj,
                          Real alpha, int jmax) {
  Real best = 0;
  for (int j = -1; j <= jmax; ++j) {
    Real w = std::pow(2.0, j * alpha);
    const auto& a = bi[static_cast<size_t>(j + 1)];
    const auto& b = bj[static_cast<size_t>(j + 1)];
    Real m = std::max((a[0] - b[0]).abs().maxCoeff(), (a[1] - b[1]).abs().maxCoeff());
    best = std::max(best, w * m);
  }
  return best;
}

}  // namespace

StoppingTimes stopping_time(const NoisePath& path, const StoppingParams& sp) {
  sp.validate();
  const Real L = sp.level_l;
  if (path.z.t_end() + 1e-12 < L)
    throw std::invalid_argument("stopping_time: path must cover [0, L]");
  if (path.wick.steps() == 0)
    throw std::invalid_argument("stopping_time: wick component missing");

  const Real kappa = sp.kappa, kappa0 = sp.kappa0();
  const Real thresh14 = std::pow(L, 0.25), thresh12 = std::sqrt(L);
  const int nL = path.z.index_of(std::min(path.z.t_end(), L));
  const Grid g(path.cfg.grid_n);
  const int jmax = DyadicPartition::max_block(g);

  // Physical block samples of z at each grid time (for Holder quotients).
  std::vector<std::vector<std::array<ArrayXXr, 2>>> zb(static_cast<size_t>(nL) + 1);
  for (int i = 0; i <= nL; ++i) {
    zb[static_cast<size_t>(i)].reserve(static_cast<size_t>(jmax + 2));
    for (int j = -1; j <= jmax; ++j) {
      VectorField blk = lp_block(path.z.at(i), j);
      zb[static_cast<size_t>(i)].push_back(
          {to_physical(blk.comp[0]), to_physical(blk.comp[1])});
    }
  }
  auto weighted_sup = [&](int i, Real alpha) {
    Real best = 0;
    for (int j = -1; j <= jmax; ++j) {
      Real w = std::pow(2.0, j * alpha);
      const auto& a = zb[static_cast<size_t>(i)][static_cast<size_t>(j + 1)];
      best = std::max(best, w * std::max(a[0].abs().maxCoeff(), a[1].abs().maxCoeff()));
    }
    return best;
  };

  const Real dt = path.z.dt;
  const int lag_window = 64;
  Real t1 = L, t2 = L, t3 = L;

  // T_L^1: sup-norm crossing of ||z(t)||_{C^-kappa}.
  for (int i = 0; i <= nL; ++i) {
    if (weighted_sup(i, -kappa) >= thresh14) {
      t1 = path.z.time(i);
      break;
    }
  }

  // T_L^2: two Holder-in-time norms (seminorm + sup), running in t.
  {
    Real expo_a = kappa0 / 2, alpha_a = -kappa - kappa0;
    Real expo_b = 0.25 * (1.0 - 2.0 * kappa - kappa0), alpha_b = -0.5 + kappa0 / 2;
    Real semi_a = 0, semi_b = 0, sup_a = 0, sup_b = 0;
    bool hit = false;
    for (int i = 0; i <= nL && !hit; ++i) {
      sup_a = std::max(sup_a, weighted_sup(i, alpha_a));
      sup_b = std::max(sup_b, weighted_sup(i, alpha_b));
      for (int lag = 1; lag <= std::min(lag_window, i); ++lag) {
        int j = i - lag;
        Real dta = std::pow(lag * dt, expo_a), dtb = std::pow(lag * dt, expo_b);
        Real qa = holder_quotient_norm(zb[static_cast<size_t>(i)],
                                       zb[static_cast<size_t>(j)], alpha_a, jmax) / dta;
        Real qb = holder_quotient_norm(zb[static_cast<size_t>(i)],
                                       zb[static_cast<size_t>(j)], alpha_b, jmax) / dtb;
        semi_a = std::max(semi_a, qa);
        semi_b = std::max(semi_b, qb);
      }
      if (semi_a + sup_a >= thresh14 || semi_b + sup_b >= thresh14) {
        t2 = path.z.time(i);
        hit = true;
      }
    }
  }

  // T_L^3: ||z^{:2:}(t)||_{C^{-2 kappa}} crossing.
  for (int i = 0; i <= nL; ++i) {
    if (holder_norm(path.wick.at(i), -2.0 * kappa) >= thresh12) {
      t3 = path.z.time(i);
      break;
    }
  }

  StoppingTimes st;
  st.t_l1 = std::min(t1, L);
  st.t_l2 = std::min(t2, L);
  st.t_l3 = std::min(t3, L);
  st.t_l = std::min({st.t_l1, st.t_l2, st.t_l3});
  return st;
}

}  // namespace ci2d
