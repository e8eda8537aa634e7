#ifndef CI2D_FFT_HPP
#define CI2D_FFT_HPP

#include "ci2d/types.hpp"

namespace ci2d {

/// In-place 1D complex DFT, contiguous data of length n.
/// sign = -1: X[k] = sum_j x[j] e^{-2пi jk/n} (no normalization)
/// sign = +1: the conjugate transform.
/// Mixed radix 2/3 with a dense fallback for other factors; sizes at desk
/// scale are 3-smooth so the fallback only triggers for odd test grids.
void fft_1d(Complex* data, int n, int sign);

/// 2D transforms on column-major Eigen arrays (rows = first axis index).
void fft_2d(ArrayXXc& a, int sign);

}  // namespace ci2d

#endif  // CI2D_FFT_HPP
