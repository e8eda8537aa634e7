#ifndef CI2D_FIELD_HPP
#define CI2D_FIELD_HPP

#include <array>
#include <functional>
#include <vector>

#include "ci2d/types.hpp"

namespace ci2d {

/// Real scalar field on T^2 stored as complex Fourier coefficients c(k),
/// basis e^{2 pi i k.x}, conjugate symmetry c(-k) = conj(c(k)).
struct ScalarField {
  Grid grid;
  ArrayXXc coef;  // coef(index(k1), index(k2))

  ScalarField() = default;
  explicit ScalarField(Grid g) : grid(g), coef(ArrayXXc::Zero(g.n, g.n)) {}

  Complex& at_mode(int k1, int k2) { return coef(grid.index(k1), grid.index(k2)); }
  Complex at_mode(int k1, int k2) const { return coef(grid.index(k1), grid.index(k2)); }
};

struct VectorField {
  Grid grid;
  std::array<ArrayXXc, 2> comp;

  VectorField() = default;
  explicit VectorField(Grid g)
      : grid(g), comp{ArrayXXc::Zero(g.n, g.n), ArrayXXc::Zero(g.n, g.n)} {}

  ScalarField component(int i) const {
    ScalarField f(grid);
    f.coef = comp[static_cast<size_t>(i)];
    return f;
  }
};

/// Symmetric 2x2 tensor field stored as (T11, T12, T22); T21 == T12.
struct SymTensorField {
  Grid grid;
  std::array<ArrayXXc, 3> comp;

  SymTensorField() = default;
  explicit SymTensorField(Grid g)
      : grid(g),
        comp{ArrayXXc::Zero(g.n, g.n), ArrayXXc::Zero(g.n, g.n),
             ArrayXXc::Zero(g.n, g.n)} {}

  const ArrayXXc& xx() const { return comp[0]; }
  const ArrayXXc& xy() const { return comp[1]; }
  const ArrayXXc& yy() const { return comp[2]; }

  ScalarField component(int i) const {
    ScalarField f(grid);
    f.coef = comp[static_cast<size_t>(i)];
    return f;
  }
};

/// General (not necessarily symmetric) 2x2 tensor field, components (i,j).
struct Tensor2Field {
  Grid grid;
  std::array<ArrayXXc, 4> comp;  // 11, 12, 21, 22

  Tensor2Field() = default;
  explicit Tensor2Field(Grid g)
      : grid(g),
        comp{ArrayXXc::Zero(g.n, g.n), ArrayXXc::Zero(g.n, g.n),
             ArrayXXc::Zero(g.n, g.n), ArrayXXc::Zero(g.n, g.n)} {}

  ArrayXXc& operator()(int i, int j) { return comp[static_cast<size_t>(2 * i + j)]; }
  const ArrayXXc& operator()(int i, int j) const {
    return comp[static_cast<size_t>(2 * i + j)];
  }
};

/// Trajectory on a uniform time grid; times may start at a negative value.
template <class F>
struct TimeSeries {
  Real t0 = 0;
  Real dt = 0;
  std::vector<F> values;

  TimeSeries() = default;
  TimeSeries(Real start, Real step) : t0(start), dt(step) {}

  int steps() const { return static_cast<int>(values.size()); }
  Real time(int i) const { return t0 + dt * i; }
  Real t_end() const { return values.empty() ? t0 : time(steps() - 1); }
  const F& at(int i) const { return values[static_cast<size_t>(i)]; }
  F& at(int i) { return values[static_cast<size_t>(i)]; }

  /// Index of the grid time closest to t (t must lie on the grid up to
  /// roundoff).
  int index_of(Real t) const {
    int i = static_cast<int>(std::lround((t - t0) / dt));
    if (i < 0 || i >= steps()) throw std::out_of_range("time outside series");
    return i;
  }
};

using ScalarSeries = TimeSeries<ScalarField>;
using VectorSeries = TimeSeries<VectorField>;
using SymTensorSeries = TimeSeries<SymTensorField>;

// ---- construction -----------------------------------------------------

/// Enforce c(-k) = conj(c(k)) exactly (self-paired modes become real).
void enforce_reality(const Grid& g, ArrayXXc& coef);

/// Spectral coefficients of real N x N samples, samples(i,j) = f(i/N, j/N).
ScalarField to_spectral(const Grid& g, const ArrayXXr& samples);
/// Collocation samples of the trigonometric interpolant.
ArrayXXr to_physical(const ScalarField& f);

ArrayXXr to_physical(const ArrayXXc& coef);

VectorField to_spectral(const Grid& g, const ArrayXXr& s1, const ArrayXXr& s2);
std::array<ArrayXXr, 2> to_physical(const VectorField& v);
std::array<ArrayXXr, 3> to_physical(const SymTensorField& t);

/// Field from a pointwise function of (x1, x2) in [0,1)^2.
ScalarField sample_function(const Grid& g,
                            const std::function<Real(Real, Real)>& f);

ScalarField random_band_limited(const Grid& g, int max_mode, uint64_t seed);
VectorField random_vector_field(const Grid& g, int max_mode, uint64_t seed);

}  // namespace ci2d

#endif  // CI2D_FIELD_HPP
