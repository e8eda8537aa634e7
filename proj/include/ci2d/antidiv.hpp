#ifndef CI2D_ANTIDIV_HPP
#define CI2D_ANTIDIV_HPP

#include "ci2d/calculus.hpp"

namespace ci2d {

/// Anti-divergence R: (Rv)_ij = -Delta^{-1} d_k v_k delta_ij
///                              + Delta^{-1} d_i v_j + Delta^{-1} d_j v_i.
/// Output is symmetric trace-free with div(Rv) = v - mean(v); annihilates
/// the spatial mean (Delta^{-1} is 0 on the zero mode).
SymTensorField antidiv(const VectorField& v);

/// Residual ||R(Delta v) - (grad v + grad^T v)||_inf for divergence-free
/// mean-zero v. Inputs with ||div v||_inf > 1e-8 are rejected.
Real antidiv_laplace_identity(const VectorField& v);

struct AntidivScalingReport {
  std::vector<int> sigmas;
  std::vector<Real> ratios;  // ||R f(sigma.)||_p / ||f||_p
  Real slope = 0;            // log-log fit, expect about -1
};

/// Frequency-scaling gain of R: f must be mean-zero and sigma * k_max must
/// stay inside the band of the refined grid used for evaluation.
AntidivScalingReport antidiv_scaling_check(const VectorField& f, Real p,
                                           const std::vector<int>& sigmas);

/// Bilinear anti-divergence
/// (B(v,A))_ij = v_l (R A_l.)_ij - R( d_i v_l (R A_l.)_ij )_j,
/// for A with zero spatial mean; div B(v,A) = vA - mean(vA).
SymTensorField bilinear_antidiv(const VectorField& v, const SymTensorField& a);

/// Scalar-vector variant used by the acceleration error: second argument u
/// need not be mean-zero; the mean part is routed through R so that
/// div B(f,u) = f u - mean(f u) holds exactly.
SymTensorField bilinear_antidiv(const ScalarField& f, const VectorField& u);

}  // namespace ci2d

#endif  // CI2D_ANTIDIV_HPP
