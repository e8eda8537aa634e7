#include "ci2d/paraproduct.hpp"

#include "ci2d/fft.hpp"

namespace ci2d {

namespace {

// Physical samples of every Littlewood-Paley block on the dealiasing grid.
std::vector<ArrayXXr> padded_blocks(const Grid& g, const ArrayXXc& coef, int m,
                                    int jmax) {
  std::vector<ArrayXXr> blocks;
  blocks.reserve(static_cast<size_t>(jmax + 2));
  int half = g.n / 2;
  for (int j = -1; j <= jmax; ++j) {
    ArrayXXc big = ArrayXXc::Zero(m, m);
    for (int k1 = -(half - 1); k1 <= half - 1; ++k1) {
      int a = g.index(k1), ap = k1 >= 0 ? k1 : k1 + m;
      for (int k2 = -(half - 1); k2 <= half - 1; ++k2) {
        int b = g.index(k2), bp = k2 >= 0 ? k2 : k2 + m;
        Real w = DyadicPartition::block_weight(std::hypot(Real(k1), Real(k2)), j);
        if (w != 0.0) big(ap, bp) = coef(a, b) * w;
      }
    }
    fft_2d(big, +1);
    blocks.push_back(big.real());
  }
  return blocks;
}

ArrayXXc band_from_padded(const ArrayXXr& samples, const Grid& g) {
  int m = static_cast<int>(samples.rows());
  ArrayXXc big = samples.cast<Complex>();
  fft_2d(big, -1);
  big /= static_cast<Real>(m) * static_cast<Real>(m);
  ArrayXXc out = ArrayXXc::Zero(g.n, g.n);
  int half = g.n / 2;
  for (int k1 = -(half - 1); k1 <= half - 1; ++k1) {
    int a = g.index(k1), ap = k1 >= 0 ? k1 : k1 + m;
    for (int k2 = -(half - 1); k2 <= half - 1; ++k2) {
      int b = g.index(k2), bp = k2 >= 0 ? k2 : k2 + m;
      out(a, b) = big(ap, bp);
    }
  }
  return out;
}

ArrayXXc paraproduct_coef(const Grid& g, const ArrayXXc& fc, const ArrayXXc& gc,
                          ParaKind kind) {
  if (kind == ParaKind::kLoRes) {
    return paraproduct_coef(g, fc, gc, ParaKind::kLo) +
           paraproduct_coef(g, fc, gc, ParaKind::kRes);
  }
  if (kind == ParaKind::kHiRes) {
    return paraproduct_coef(g, fc, gc, ParaKind::kHi) +
           paraproduct_coef(g, fc, gc, ParaKind::kRes);
  }
  int m = dealias_pad_size(g.n);
  int jmax = DyadicPartition::max_block(g);
  auto fb = padded_blocks(g, fc, m, jmax);
  auto gb = padded_blocks(g, gc, m, jmax);
  auto block = [&](const std::vector<ArrayXXr>& v, int j) -> const ArrayXXr& {
    return v[static_cast<size_t>(j + 1)];
  };
  ArrayXXr acc = ArrayXXr::Zero(m, m);
  if (kind == ParaKind::kLo || kind == ParaKind::kHi) {
    const auto& low = (kind == ParaKind::kLo) ? fb : gb;
    const auto& high = (kind == ParaKind::kLo) ? gb : fb;
    ArrayXXr partial = ArrayXXr::Zero(m, m);  // sum of low blocks <= j-2
    for (int j = 1; j <= jmax; ++j) {
      partial += block(low, j - 2);
      acc += partial * block(high, j);
    }
  } else {  // resonant
    for (int j = -1; j <= jmax; ++j) {
      ArrayXXr near = block(gb, j);
      if (j - 1 >= -1) near += block(gb, j - 1);
      if (j + 1 <= jmax) near += block(gb, j + 1);
      acc += block(fb, j) * near;
    }
  }
  return band_from_padded(acc, g);
}

}  // namespace

ScalarField paraproduct(const ScalarField& f, const ScalarField& g, ParaKind kind) {
  require_same_grid(f.grid, g.grid);
  ScalarField out(f.grid);
  out.coef = paraproduct_coef(f.grid, f.coef, g.coef, kind);
  return out;
}

Tensor2Field tensor_paraproduct(const VectorField& f, const VectorField& g,
                                ParaKind kind) {
  require_same_grid(f.grid, g.grid);
  Tensor2Field out(f.grid);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out(i, j) = paraproduct_coef(f.grid, f.comp[static_cast<size_t>(i)],
                                   g.comp[static_cast<size_t>(j)], kind);
  return out;
}

}  // namespace ci2d
