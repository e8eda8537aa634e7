#ifndef CI2D_TYPES_HPP
#define CI2D_TYPES_HPP

#include <complex>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/Dense>

namespace ci2d {

using Real = double;
using Complex = std::complex<Real>;

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using ArrayXXc = Eigen::ArrayXXcd;
using ArrayXXr = Eigen::ArrayXXd;
using VectorXr = Eigen::VectorXd;
using VectorXc = Eigen::VectorXcd;

inline constexpr Real kPi = 3.14159265358979323846264338327950288;
inline constexpr Real kTwoPi = 2.0 * kPi;

/// Mode grid for T^2 = R^2/Z^2: modes k in {-N/2,...,N/2-1}^2, collocation
/// points x = (i/N, j/N) on [0,1)^2.
struct Grid {
  int n = 0;

  Grid() = default;
  explicit Grid(int n_modes) : n(n_modes) {
    if (n < 4 || n % 2 != 0)
      throw std::invalid_argument("Grid: N must be even and >= 4");
  }

  int size() const { return n; }
  int nyquist() const { return n / 2; }

  /// Signed mode for storage index a in [0,N).
  int mode(int idx) const { return idx < n / 2 ? idx : idx - n; }
  /// Storage index for signed mode k in [-N/2, N/2-1].
  int index(int k) const { return k >= 0 ? k : k + n; }

  bool operator==(const Grid& o) const { return n == o.n; }
  bool operator!=(const Grid& o) const { return n != o.n; }
};

inline void require_same_grid(const Grid& a, const Grid& b) {
  if (a != b) throw std::invalid_argument("grid mismatch");
}

}  // namespace ci2d

#endif  // CI2D_TYPES_HPP
