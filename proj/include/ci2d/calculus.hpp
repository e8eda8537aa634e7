#ifndef CI2D_CALCULUS_HPP
#define CI2D_CALCULUS_HPP

#include <functional>

#include "ci2d/field.hpp"

namespace ci2d {

// ---- multipliers -------------------------------------------------------

/// Apply a Fourier multiplier m(k1,k2) in place.
void apply_multiplier(const Grid& g, ArrayXXc& coef,
                      const std::function<Complex(int, int)>& m);

ScalarField multiplied(const ScalarField& f,
                       const std::function<Complex(int, int)>& m);
VectorField multiplied(const VectorField& v,
                       const std::function<Complex(int, int)>& m);
SymTensorField multiplied(const SymTensorField& t,
                          const std::function<Complex(int, int)>& m);

// ---- differential calculus --------------------------------------------

/// d^order/dx_axis^order, axis in {1,2}; symbol (2 pi i k_axis)^order.
/// Odd orders zero the unpaired Nyquist line to preserve reality.
ScalarField derivative(const ScalarField& f, int axis, int order);
VectorField derivative(const VectorField& v, int axis, int order);
SymTensorField derivative(const SymTensorField& t, int axis, int order);

VectorField gradient(const ScalarField& f);
/// perp gradient, sign convention (d2 f, -d1 f).
VectorField perp_gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
VectorField divergence(const SymTensorField& t);
VectorField divergence(const Tensor2Field& t);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& v);
/// Delta^{-1}: multiplier -1/(4 pi^2 |k|^2) on k != 0, zero on k = 0.
ScalarField inverse_laplacian(const ScalarField& f);

Complex mean(const ScalarField& f);
Vec2 mean(const VectorField& v);
Mat2 mean(const SymTensorField& t);

ScalarField remove_mean(const ScalarField& f);
VectorField remove_mean(const VectorField& v);
SymTensorField remove_mean(const SymTensorField& t);

SymTensorField traceless(const SymTensorField& t);
SymTensorField symmetric_part(const Tensor2Field& t);
SymTensorField traceless_symmetric(const Tensor2Field& t);

/// Leray/Helmholtz projection: mode k != 0 maps v(k) to (Id - k k^T/|k|^2) v(k),
/// zero mode unchanged.
VectorField helmholtz_project(const VectorField& v);

// ---- arithmetic --------------------------------------------------------

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(Real s, const ScalarField& f);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(Real s, const VectorField& v);
SymTensorField operator+(const SymTensorField& a, const SymTensorField& b);
SymTensorField operator-(const SymTensorField& a, const SymTensorField& b);
SymTensorField operator*(Real s, const SymTensorField& t);
Tensor2Field operator+(const Tensor2Field& a, const Tensor2Field& b);
Tensor2Field operator-(const Tensor2Field& a, const Tensor2Field& b);
Tensor2Field operator*(Real s, const Tensor2Field& t);

// ---- dealiased products -------------------------------------------------

/// Padded size used for dealiased products (3-smooth, >= 3N/2).
int dealias_pad_size(int n);

/// Pointwise products computed by collocation on the zero-padded grid,
/// truncated back to |k|_inf <= N/2-1.
ScalarField multiply(const ScalarField& a, const ScalarField& b);
VectorField multiply(const ScalarField& a, const VectorField& b);
SymTensorField multiply(const ScalarField& a, const SymTensorField& b);
/// a (x) b, in general non-symmetric.
Tensor2Field outer(const VectorField& a, const VectorField& b);
/// a (x) a, symmetric by construction.
SymTensorField outer_sym(const VectorField& a);
/// a (x) b + b (x) a.
SymTensorField outer_symmetrized(const VectorField& a, const VectorField& b);
/// Pointwise dot product a . b.
ScalarField dot(const VectorField& a, const VectorField& b);
/// Row-vector/matrix contraction (v A)_i = v_l A_{li}.
VectorField contract(const VectorField& v, const SymTensorField& a);

// ---- norms ---------------------------------------------------------------

/// L^p by collocation quadrature, p in [1, inf); vector/tensor arguments use
/// the pointwise Euclidean (Frobenius) magnitude.
Real norm_lp(const ScalarField& f, Real p);
Real norm_lp(const VectorField& v, Real p);
Real norm_lp(const SymTensorField& t, Real p);
Real norm_linf(const ScalarField& f);
Real norm_linf(const VectorField& v);
Real norm_linf(const SymTensorField& t);
/// H^s by Plancherel: sum (1+4pi^2|k|^2)^s |c(k)|^2 over modes and components.
Real norm_hs(const ScalarField& f, Real s);
Real norm_hs(const VectorField& v, Real s);
/// W^{s,p}: (I - Delta)^{s/2} multiplier then L^p quadrature.
Real norm_wsp(const ScalarField& f, Real s, Real p);
Real norm_wsp(const VectorField& v, Real s, Real p);
/// Spatial C^N snapshot norm: sum over |alpha| <= N of ||D^alpha f||_inf.
Real norm_cn(const ScalarField& f, int n_deriv);
Real norm_cn(const VectorField& v, int n_deriv);
Real norm_cn(const SymTensorField& t, int n_deriv);

}  // namespace ci2d

#endif  // CI2D_CALCULUS_HPP
