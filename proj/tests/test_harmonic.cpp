#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ci2d/holder.hpp"
#include "ci2d/paraproduct.hpp"

using namespace ci2d;

TEST_CASE("partition of unity per mode") {
  Grid g(32);
  int jmax = DyadicPartition::max_block(g);
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b) {
      Real r = std::hypot(Real(g.mode(a)), Real(g.mode(b)));
      Real sum = 0;
      for (int j = -1; j <= jmax; ++j) sum += DyadicPartition::block_weight(r, j);
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  // supports: adjacent blocks only
  for (Real r : {0.5, 1.0, 3.0, 7.7, 12.0, 20.0}) {
    for (int j = 0; j <= jmax; ++j)
      for (int i = j + 2; i <= jmax; ++i) {
        Real wi = DyadicPartition::block_weight(r, i);
        Real wj = DyadicPartition::block_weight(r, j);
        CHECK(wi * wj == 0.0);
      }
  }
}

TEST_CASE("lp blocks: low block, single mode, reconstruction") {
  Grid g(32);
  ScalarField one = sample_function(g, [](Real, Real) { return 1.0; });
  CHECK(norm_linf(lp_block(one, -1) - one) < 1e-13);
  for (int j = 0; j <= DyadicPartition::max_block(g); ++j)
    CHECK(norm_linf(lp_block(one, j)) < 1e-13);

  // single mode |k| = 12: weights of the covering blocks sum to one
  ScalarField f(g);
  f.at_mode(12, 0) = Complex(0.5, 0);
  f.at_mode(-12, 0) = Complex(0.5, 0);
  Real covered = 0;
  for (int j = -1; j <= DyadicPartition::max_block(g); ++j) {
    Real w = DyadicPartition::block_weight(12.0, j);
    ScalarField blk = lp_block(f, j);
    CHECK(std::abs(blk.at_mode(12, 0).real() - 0.5 * w) < 1e-13);
    covered += w;
  }
  CHECK(covered == doctest::Approx(1.0).epsilon(1e-12));

  ScalarField r = random_band_limited(g, 14, 5);
  ScalarField sum(g);
  for (int j = -1; j <= DyadicPartition::max_block(g); ++j)
    sum = sum + lp_block(r, j);
  CHECK(norm_linf(sum - r) < 1e-12);
}

TEST_CASE("localizers split the identity exactly") {
  Grid g(64);
  ScalarField f = random_band_limited(g, 30, 9);
  for (int J : {-2, 0, 2, 4, 8}) {
    ScalarField lo = localize(f, J, LocalizeSide::kAtMost);
    ScalarField hi = localize(f, J, LocalizeSide::kAbove);
    CHECK(norm_linf((lo + hi) - f) < 1e-12);
  }
  CHECK(norm_linf(localize(f, DyadicPartition::max_block(g), LocalizeSide::kAtMost) - f) <
        1e-12);
  CHECK(norm_linf(localize(f, -2, LocalizeSide::kAtMost)) < 1e-13);

  // modes at |k| in {1, 100}: Delta_{>4} keeps only the high content
  Grid gg(256);
  ScalarField two(gg);
  two.at_mode(1, 0) = Complex(0.5, 0);
  two.at_mode(-1, 0) = Complex(0.5, 0);
  two.at_mode(100, 0) = Complex(0.5, 0);
  two.at_mode(-100, 0) = Complex(0.5, 0);
  ScalarField hi = localize(two, 4, LocalizeSide::kAbove);
  // oracle: block sums = 1 - chi(|k|/2^5)
  Real w1 = 1.0 - DyadicPartition::chi_profile(1.0 / 32.0);
  Real w100 = 1.0 - DyadicPartition::chi_profile(100.0 / 32.0);
  CHECK(std::abs(hi.at_mode(1, 0).real() - 0.5 * w1) < 1e-13);
  CHECK(std::abs(hi.at_mode(100, 0).real() - 0.5 * w100) < 1e-13);
  CHECK(w1 == 0.0);
  CHECK(w100 == 1.0);

  // (deltaf)-style tail report stays bounded
  auto rep = localizer_bound_report(random_band_limited(gg, 120, 3), 4, 0.25, 0.75);
  CHECK(rep.tail_norm <= rep.reference * 4.0);
}

TEST_CASE("besov norms") {
  Grid g(32);
  ScalarField zero(g);
  CHECK(besov_norm(zero, BesovIndex(0.7, 2, 2)) == 0.0);

  ScalarField one = sample_function(g, [](Real, Real) { return 1.0; });
  for (Real alpha : {-0.5, 0.0, 1.0})
    CHECK(besov_norm(one, BesovIndex(alpha, 3, 1)) ==
          doctest::Approx(std::pow(2.0, -alpha)).epsilon(1e-12));

  // single mode |k| = 8 with (1, inf, inf): sup_j 2^j w_j ||block||_inf
  ScalarField f(g);
  f.at_mode(8, 0) = Complex(0.5, 0);
  f.at_mode(-8, 0) = Complex(0.5, 0);
  Real expect = 0;
  for (int j = -1; j <= DyadicPartition::max_block(g); ++j) {
    Real w = DyadicPartition::block_weight(8.0, j);
    if (w > 0) expect = std::max(expect, std::pow(2.0, j) * w * 1.0);
  }
  Real inf = std::numeric_limits<Real>::infinity();
  CHECK(besov_norm(f, BesovIndex(1, inf, inf)) == doctest::Approx(expect).epsilon(1e-10));

  // H^alpha consistency: B^alpha_{2,2} within 20% of the Sobolev norm
  for (uint64_t s = 1; s <= 5; ++s) {
    ScalarField r = random_band_limited(g, 12, s);
    for (Real alpha : {-0.5, 0.5, 1.0}) {
      Real b = besov_norm(r, BesovIndex(alpha, 2, 2));
      Real h = norm_hs(r, alpha);
      CHECK(std::abs(b - h) <= 0.2 * h);
    }
  }
}

TEST_CASE("bony decomposition reproduces the product") {
  Grid g(32);
  for (uint64_t s = 1; s <= 200; ++s) {
    ScalarField f = random_band_limited(g, 14, s);
    ScalarField gg = random_band_limited(g, 14, s + 1000);
    ScalarField sum = paraproduct(f, gg, ParaKind::kLo) +
                      paraproduct(f, gg, ParaKind::kRes) +
                      paraproduct(f, gg, ParaKind::kHi);
    ScalarField prod = multiply(f, gg);
    CHECK(norm_linf(sum - prod) < 1e-10);
  }
}

TEST_CASE("paraproduct kinds and frequency separation") {
  // f in block 2 (|k| ~ 6), g in block 8 (|k| ~ 384): the product lands
  // entirely in f Lo g (i < j - 1).
  Grid g(1024);
  ScalarField lo(g), hi(g);
  lo.at_mode(6, 0) = Complex(0.5, 0);
  lo.at_mode(-6, 0) = Complex(0.5, 0);
  hi.at_mode(0, 384) = Complex(0.5, 0);
  hi.at_mode(0, -384) = Complex(0.5, 0);
  CHECK(DyadicPartition::block_weight(6.0, 2) == doctest::Approx(1.0));
  CHECK(DyadicPartition::block_weight(384.0, 8) == doctest::Approx(1.0));

  ScalarField plo = paraproduct(lo, hi, ParaKind::kLo);
  ScalarField pres = paraproduct(lo, hi, ParaKind::kRes);
  ScalarField phi = paraproduct(lo, hi, ParaKind::kHi);
  ScalarField prod = multiply(lo, hi);
  CHECK(norm_linf(plo - prod) < 1e-12);
  CHECK(norm_linf(pres) < 1e-13);
  CHECK(norm_linf(phi) < 1e-13);

  // LoRes/HiRes combinations
  ScalarField f = random_band_limited(Grid(32), 12, 3);
  ScalarField h = random_band_limited(Grid(32), 12, 77);
  CHECK(norm_linf(paraproduct(f, h, ParaKind::kLoRes) -
                  (paraproduct(f, h, ParaKind::kLo) + paraproduct(f, h, ParaKind::kRes))) <
        1e-12);
  CHECK(norm_linf(paraproduct(f, h, ParaKind::kHiRes) -
                  (paraproduct(f, h, ParaKind::kHi) + paraproduct(f, h, ParaKind::kRes))) <
        1e-12);
}

TEST_CASE("tensor paraproducts decompose the tensor product") {
  Grid g(16);
  VectorField f = random_vector_field(g, 6, 4);
  VectorField h = random_vector_field(g, 6, 44);
  Tensor2Field sum = tensor_paraproduct(f, h, ParaKind::kLo) +
                     tensor_paraproduct(f, h, ParaKind::kRes) +
                     tensor_paraproduct(f, h, ParaKind::kHi);
  Tensor2Field prod = outer(f, h);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      ScalarField d(g);
      d.coef = sum(i, j) - prod(i, j);
      CHECK(norm_linf(d) < 1e-10);
    }
}

TEST_CASE("paraproduct bound constant is stable (Lemma 2.3 direction)") {
  Grid g(16);
  Real beta = 0.5;
  std::vector<Real> constants;
  for (uint64_t s = 1; s <= 8; ++s) {
    ScalarField f = random_band_limited(g, 6, s);
    ScalarField h = random_band_limited(g, 6, s + 31);
    Real lhs = besov_norm(paraproduct(f, h, ParaKind::kLo), BesovIndex(beta, 2, 1));
    Real rhs = norm_lp(f, std::numeric_limits<Real>::infinity()) *
               besov_norm(h, BesovIndex(beta, 2, 1));
    if (rhs > 0) constants.push_back(lhs / rhs);
  }
  Real cmax = *std::max_element(constants.begin(), constants.end());
  Real cmin = *std::min_element(constants.begin(), constants.end());
  CHECK(cmax < 10.0);
  CHECK(cmax / std::max(cmin, 1e-6) < 50.0);
}

TEST_CASE("embedding direction (Lemma 2.2)") {
  Grid g(32);
  Real alpha = 0.6, p1 = 2.0, p2 = 6.0, q = 2.0;
  Real shifted = alpha - 2.0 * (1.0 / p1 - 1.0 / p2);
  Real cworst = 0;
  for (uint64_t s = 1; s <= 10; ++s) {
    ScalarField f = random_band_limited(g, 12, s);
    Real lhs = besov_norm(f, BesovIndex(shifted, p2, q));
    Real rhs = besov_norm(f, BesovIndex(alpha, p1, q));
    if (rhs > 0) cworst = std::max(cworst, lhs / rhs);
  }
  CHECK(cworst < 4.0);
}

TEST_CASE("block operators commute with derivatives") {
  Grid g(32);
  ScalarField f = random_band_limited(g, 14, 4);
  for (int j : {-1, 1, 3}) {
    ScalarField a = lp_block(derivative(f, 1, 1), j);
    ScalarField b = derivative(lp_block(f, j), 1, 1);
    CHECK(norm_linf(a - b) < 1e-12);
  }
}

TEST_CASE("improved Holder: constant amplitude has zero gap") {
  std::vector<Real> f(128);
  for (int i = 0; i < 128; ++i) f[static_cast<size_t>(i)] = std::sin(kTwoPi * i / 128.0);
  auto rep = improved_holder_check([](Real) { return 2.5; }, f, 2.0, 8, 0, 8);
  CHECK(rep.lhs_gap < 1e-12);
}

TEST_CASE("improved Holder: mean-zero bound against quadrature oracle") {
  const int m = 1024;
  std::vector<Real> f(m);
  for (int i = 0; i < m; ++i) f[static_cast<size_t>(i)] = std::sin(kTwoPi * i / m);
  for (int sigma : {4, 16, 64}) {
    auto rep = improved_holder_meanzero([](Real t) { return t; }, f, sigma, 0, sigma);
    // oracle: |int_0^1 t sin(2 pi sigma t) dt| = 1/(2 pi sigma)
    Real exact = 1.0 / (kTwoPi * sigma);
    CHECK(rep.lhs_gap == doctest::Approx(exact).epsilon(1e-3));
    CHECK(rep.lhs_gap <= rep.bound);
  }
}

TEST_CASE("improved Holder decorrelation slope") {
  const int m = 512;
  std::vector<Real> f(m);
  for (int i = 0; i < m; ++i) {
    Real x = static_cast<Real>(i) / m;
    f[static_cast<size_t>(i)] = (x < 0.5 ? 1.0 : -1.0) + 0.3 * std::sin(kTwoPi * x);
  }
  auto a = [](Real t) { return std::sin(kTwoPi * t) + 1.3; };
  std::vector<Real> sigmas = {4, 8, 16, 32, 64};
  for (Real p : {1.0, 2.0}) {
    std::vector<Real> gaps;
    for (Real s : sigmas)
      gaps.push_back(improved_holder_check(a, f, p, static_cast<int>(s), 0,
                                           static_cast<int>(s))
                         .lhs_gap);
    Real slope = fitted_slope(sigmas, gaps);
    CHECK(slope <= -1.0 / p + 0.2);
  }
  // sigma doubling roughly halves the gap at p = 1
  std::vector<Real> gaps;
  auto aa = [](Real t) { return std::sin(kTwoPi * t); };
  for (Real s : {8.0, 16.0, 32.0})
    gaps.push_back(improved_holder_check(aa, f, 1.0, static_cast<int>(s), 0,
                                         static_cast<int>(s))
                       .lhs_gap);
  CHECK(gaps[1] / gaps[0] == doctest::Approx(0.5).epsilon(0.35));
  CHECK(gaps[2] / gaps[1] == doctest::Approx(0.5).epsilon(0.35));
}

TEST_CASE("improved Holder 2D variant") {
  Grid g(16);
  ScalarField a = random_band_limited(g, 2, 3);
  ScalarField f = random_band_limited(g, 5, 9);
  auto rep = improved_holder_check(a, remove_mean(f), 2.0, 4);
  CHECK(rep.lhs_gap <= 5.0 * rep.bound);

  ScalarField cst = sample_function(g, [](Real, Real) { return 1.7; });
  auto rep0 = improved_holder_check(cst, f, 2.0, 4);
  CHECK(rep0.lhs_gap < 1e-10);
}

TEST_CASE("empty window rejected") {
  std::vector<Real> f(16, 1.0);
  CHECK_THROWS_AS(improved_holder_check([](Real) { return 1.0; }, f, 1.0, 4, 3, 3),
                  std::invalid_argument);
}
