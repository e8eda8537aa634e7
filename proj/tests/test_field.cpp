#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "ci2d/calculus.hpp"
#include "ci2d/field_io.hpp"
#include "oracles.hpp"

using namespace ci2d;

TEST_CASE("transform of constants and single harmonics") {
  Grid g(8);
  ArrayXXr ones = ArrayXXr::Constant(8, 8, 1.0);
  ScalarField c = to_spectral(g, ones);
  CHECK(std::abs(c.coef(0, 0) - Complex(1, 0)) < 1e-14);
  CHECK(c.coef.abs().sum() == doctest::Approx(1.0).epsilon(1e-12));

  ScalarField f = sample_function(g, [](Real x, Real) { return std::cos(kTwoPi * x); });
  CHECK(std::abs(f.at_mode(1, 0) - Complex(0.5, 0)) < 1e-13);
  CHECK(std::abs(f.at_mode(-1, 0) - Complex(0.5, 0)) < 1e-13);
}

TEST_CASE("round trip and Parseval") {
  Grid g(16);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<Real> u(-1, 1);
  ArrayXXr s(16, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) s(i, j) = u(rng);
  ScalarField f = to_spectral(g, s);
  ArrayXXr back = to_physical(f);
  CHECK((back - s).abs().maxCoeff() < 1e-12 * s.abs().maxCoeff());

  Real l2 = norm_lp(f, 2.0);
  Real plancherel = std::sqrt(f.coef.abs2().sum());
  CHECK(l2 == doctest::Approx(plancherel).epsilon(1e-10));
}

TEST_CASE("transform matches direct DFT summation") {
  Grid g(8);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<Real> u(-1, 1);
  ArrayXXr s(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) s(i, j) = u(rng);
  ScalarField f = to_spectral(g, s);
  ArrayXXc direct = oracle::dft_direct(s);
  CHECK((f.coef - direct).abs().maxCoeff() < 1e-12);
  ArrayXXr physical = oracle::idft_direct(g, f.coef);
  CHECK((physical - s).abs().maxCoeff() < 1e-12);
}

TEST_CASE("derivatives are exact on band-limited fields") {
  Grid g(16);
  ScalarField f = sample_function(g, [](Real x, Real) { return std::sin(kTwoPi * x); });
  ArrayXXr d = to_physical(derivative(f, 1, 1));
  for (int i = 0; i < 16; ++i)
    CHECK(d(i, 0) == doctest::Approx(kTwoPi * std::cos(kTwoPi * i / 16.0)).epsilon(1e-12));

  ScalarField c = sample_function(g, [](Real, Real) { return 0.7; });
  CHECK(norm_linf(derivative(c, 2, 1)) < 1e-13);

  // d1 d2 of cos(2 pi (3x - 2y)): coefficient at (3,-2) is multiplied by
  // (2 pi i 3)(-2 pi i 2) = 24 pi^2, checked against a symbolic oracle.
  ScalarField h =
      sample_function(g, [](Real x, Real y) { return std::cos(kTwoPi * (3 * x - 2 * y)); });
  ScalarField dd = derivative(derivative(h, 1, 1), 2, 1);
  Complex expected = Complex(0, kTwoPi * 3.0) * Complex(0, kTwoPi * (-2.0)) * Complex(0.5, 0);
  CHECK(std::abs(dd.at_mode(3, -2) - expected) < 1e-10);
  CHECK(expected.real() == doctest::Approx(12.0 * kPi * kPi));
}

TEST_CASE("helmholtz projection") {
  Grid g(16);
  ScalarField f = random_band_limited(g, 5, 3);
  VectorField grad = gradient(remove_mean(f));
  CHECK(norm_linf(helmholtz_project(grad)) < 1e-12);

  VectorField curl = perp_gradient(f);
  VectorField proj = helmholtz_project(curl);
  CHECK(norm_linf(proj - curl) < 1e-12);

  VectorField v(g);
  v.comp[0](g.index(1), g.index(0)) = Complex(1, 0);
  v.comp[1](g.index(1), g.index(0)) = Complex(1, 0);
  v.comp[0](g.index(-1), g.index(0)) = Complex(1, 0);
  v.comp[1](g.index(-1), g.index(0)) = Complex(1, 0);
  VectorField pv = helmholtz_project(v);
  // khat = (1,0): the first component dies, the second survives.
  CHECK(std::abs(pv.comp[0](g.index(1), g.index(0))) < 1e-14);
  CHECK(std::abs(pv.comp[1](g.index(1), g.index(0)) - Complex(1, 0)) < 1e-14);

  // idempotence on random fields
  VectorField r = random_vector_field(g, 6, 17);
  VectorField p1 = helmholtz_project(r);
  CHECK(norm_linf(helmholtz_project(p1) - p1) < 1e-12);
  CHECK(norm_linf(divergence(p1)) < 1e-12);
}

TEST_CASE("traceless, perp gradient, remove_mean") {
  Grid g(8);
  ScalarField s = random_band_limited(g, 3, 5);
  SymTensorField t(g);
  t.comp[0] = s.coef;
  t.comp[2] = s.coef;
  CHECK(norm_linf(traceless(t)) < 1e-13);

  ScalarField f = sample_function(g, [](Real, Real y) { return std::sin(kTwoPi * y); });
  auto pg = to_physical(perp_gradient(f));
  // (d2 f, -d1 f) = (2 pi cos(2 pi y), 0)
  for (int j = 0; j < 8; ++j)
    CHECK(pg[0](0, j) == doctest::Approx(kTwoPi * std::cos(kTwoPi * j / 8.0)).epsilon(1e-12));
  CHECK(pg[1].abs().maxCoeff() < 1e-12);

  ScalarField m = sample_function(g, [](Real x, Real) { return 1.0 + std::cos(kTwoPi * x); });
  ScalarField r = remove_mean(m);
  CHECK(std::abs(mean(r)) < 1e-14);
  CHECK(std::abs(r.at_mode(1, 0) - Complex(0.5, 0)) < 1e-13);
}

TEST_CASE("reality of public constructors") {
  Grid g(12);
  for (uint64_t s = 0; s < 100; ++s) {
    ScalarField f = random_band_limited(g, 5, s);
    for (int a = 0; a < g.n; ++a)
      for (int b = 0; b < g.n; ++b) {
        Complex c1 = f.coef(a, b);
        Complex c2 = f.coef((g.n - a) % g.n, (g.n - b) % g.n);
        CHECK(std::abs(c1 - std::conj(c2)) < 1e-14);
      }
  }
}

TEST_CASE("calculus consistency on random fields") {
  Grid g(16);
  for (uint64_t s = 1; s <= 20; ++s) {
    ScalarField f = random_band_limited(g, 6, s);
    CHECK(norm_linf(divergence(perp_gradient(f))) < 1e-11);
    VectorField v = random_vector_field(g, 6, s + 100);
    CHECK(norm_linf(divergence(helmholtz_project(v))) < 1e-11);
  }
}

TEST_CASE("norms") {
  Grid g(16);
  ScalarField s = sample_function(g, [](Real x, Real) { return std::sin(kTwoPi * x); });
  CHECK(norm_lp(s, 2.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  ScalarField one = sample_function(g, [](Real, Real) { return 1.0; });
  for (Real ss : {-1.0, 0.0, 0.5, 2.0}) CHECK(norm_hs(one, ss) == doctest::Approx(1.0));

  // ||cos(2 pi x)||_{H^1} = sqrt((1 + 4 pi^2)/2): Plancherel by hand, with a
  // quadrature cross-check through W^{1,2}.
  ScalarField c = sample_function(g, [](Real x, Real) { return std::cos(kTwoPi * x); });
  Real expected = std::sqrt((1.0 + 4.0 * kPi * kPi) / 2.0);
  CHECK(norm_hs(c, 1.0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(norm_wsp(c, 1.0, 2.0) == doctest::Approx(expected).epsilon(1e-10));

  CHECK(norm_linf(c) == doctest::Approx(1.0).epsilon(1e-12));
  // |cos| has kinks, so the collocation quadrature is only O(h^2) here.
  CHECK(norm_lp(c, 1.0) == doctest::Approx(2.0 / kPi).epsilon(5e-3));
}

TEST_CASE("dealiased products match refined-grid oracle") {
  Grid g(8);
  for (uint64_t s = 1; s <= 10; ++s) {
    ScalarField a = random_band_limited(g, 3, s);
    ScalarField b = random_band_limited(g, 3, s + 50);
    ScalarField ab = multiply(a, b);
    // Oracle: exact product of the interpolants on a refined grid, then
    // truncation by direct DFT.
    Grid fine(32);
    ArrayXXc pa = ArrayXXc::Zero(32, 32), pb = ArrayXXc::Zero(32, 32);
    for (int k1 = -3; k1 <= 3; ++k1)
      for (int k2 = -3; k2 <= 3; ++k2) {
        pa(fine.index(k1), fine.index(k2)) = a.at_mode(k1, k2);
        pb(fine.index(k1), fine.index(k2)) = b.at_mode(k1, k2);
      }
    ArrayXXr sa = oracle::idft_direct(fine, pa);
    ArrayXXr sb = oracle::idft_direct(fine, pb);
    ArrayXXc prod = oracle::dft_direct(sa * sb);
    Real err = 0;
    for (int k1 = -3; k1 <= 3; ++k1)
      for (int k2 = -3; k2 <= 3; ++k2)
        err = std::max(err, std::abs(ab.at_mode(k1, k2) -
                                     prod(fine.index(k1), fine.index(k2))));
    CHECK(err < 1e-10);
  }
}

TEST_CASE("field dump round trips bit-exactly") {
  Grid g(8);
  VectorField v = random_vector_field(g, 3, 77);
  std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
  dump_field(ss, v, 0.625);
  FieldDump d = load_field(ss);
  CHECK(d.grid_n == 8);
  CHECK(d.components == 2);
  CHECK(d.time == 0.625);
  auto planes = to_physical(v);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        CHECK(d.planes[static_cast<size_t>(c)](i, j) == planes[static_cast<size_t>(c)](i, j));
      }

  // Dumping the same field twice is byte-identical.
  std::stringstream s1b(std::ios::in | std::ios::out | std::ios::binary);
  dump_field(s1b, v, 0.625);
  CHECK(ss.str().substr(0, s1b.str().size()) == s1b.str());
}

TEST_CASE("dimension mismatch is rejected") {
  Grid g(8);
  ArrayXXr bad(4, 4);
  CHECK_THROWS_AS(to_spectral(g, bad), std::invalid_argument);
  CHECK_THROWS_AS(Grid(7), std::invalid_argument);
  CHECK_THROWS_AS(Grid(2), std::invalid_argument);
}
