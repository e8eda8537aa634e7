#ifndef CI2D_PARAPRODUCT_HPP
#define CI2D_PARAPRODUCT_HPP

#include "ci2d/dyadic.hpp"

namespace ci2d {

/// Bony paraproduct kinds: f Lo g sums Delta_i f Delta_j g over i < j-1,
/// Res over |i-j| <= 1, Hi over i > j+1. LoRes = Res + Lo, HiRes = Res + Hi.
enum class ParaKind { kLo, kRes, kHi, kLoRes, kHiRes };

ScalarField paraproduct(const ScalarField& f, const ScalarField& g, ParaKind kind);

/// Tensor paraproduct (f_i para g_j)_{ij} for vector fields.
Tensor2Field tensor_paraproduct(const VectorField& f, const VectorField& g,
                                ParaKind kind);

}  // namespace ci2d

#endif  // CI2D_PARAPRODUCT_HPP
