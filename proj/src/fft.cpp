#include "ci2d/fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace ci2d {
namespace {

struct RootTable {
  int n = 0;
  std::vector<Complex> w;  // w[j] = e^{-2pi i j / n}

  explicit RootTable(int n_) : n(n_), w(n_) {
    for (int j = 0; j < n; ++j) {
      Real ang = -kTwoPi * static_cast<Real>(j) / static_cast<Real>(n);
      w[j] = Complex(std::cos(ang), std::sin(ang));
    }
  }

  Complex root(long long j, int sign) const {
    long long m = j % n;
    if (m < 0) m += n;
    Complex r = w[static_cast<size_t>(m)];
    return sign < 0 ? r : std::conj(r);
  }
};

const RootTable& roots_for(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<RootTable>> cache;
  std::scoped_lock lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RootTable>(n);
  return *slot;
}

int smallest_radix(int n) {
  if (n % 2 == 0) return 2;
  if (n % 3 == 0) return 3;
  return n;
}

// Recursive decimation in time. in has logical length n with given stride,
// out is contiguous. rootstep maps local mode spacing onto the top table.
void fft_rec(const Complex* in, Complex* out, int n, int stride,
             const RootTable& tw, int rootstep, int sign) {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  int r = smallest_radix(n);
  if (r == n) {  // dense transform for prime length
    for (int k = 0; k < n; ++k) {
      Complex acc(0, 0);
      for (int j = 0; j < n; ++j)
        acc += in[static_cast<long long>(j) * stride] *
               tw.root(static_cast<long long>(j) * k * rootstep, sign);
      out[k] = acc;
    }
    return;
  }
  int m = n / r;
  for (int t = 0; t < r; ++t)
    fft_rec(in + static_cast<long long>(t) * stride, out + t * m, m,
            stride * r, tw, rootstep * r, sign);
  std::vector<Complex> tmp(n);
  for (int q = 0; q < m; ++q) {
    for (int s = 0; s < r; ++s) {
      Complex acc(0, 0);
      long long k = q + static_cast<long long>(s) * m;
      for (int t = 0; t < r; ++t)
        acc += tw.root(k * t * rootstep, sign) * out[t * m + q];
      tmp[static_cast<size_t>(k)] = acc;
    }
  }
  std::copy(tmp.begin(), tmp.end(), out);
}

}  // namespace

void fft_1d(Complex* data, int n, int sign) {
  if (n <= 1) return;
  const RootTable& tw = roots_for(n);
  std::vector<Complex> out(n);
  fft_rec(data, out.data(), n, 1, tw, 1, sign);
  std::copy(out.begin(), out.end(), data);
}

void fft_2d(ArrayXXc& a, int sign) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  // Columns are contiguous in Eigen's column-major layout.
  for (int c = 0; c < cols; ++c) fft_1d(a.col(c).data(), rows, sign);
  std::vector<Complex> buf(cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) buf[c] = a(r, c);
    fft_1d(buf.data(), cols, sign);
    for (int c = 0; c < cols; ++c) a(r, c) = buf[c];
  }
}

}  // namespace ci2d
