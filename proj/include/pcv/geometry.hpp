#ifndef PCV_GEOMETRY_HPP
#define PCV_GEOMETRY_HPP

#include <array>
#include <utility>

#include "pcv/fields.hpp"
#include "pcv/linalg.hpp"

namespace pcv {

using Christoffel = std::array<Mat3J, 3>; // [k][i][j], symmetric in (i,j)
// Riem[l][k][i][j] is the d/dx^l component of R(d/dx^i, d/dx^j) d/dx^k.
using RiemannTensor = std::array<std::array<Mat3J, 3>, 3>;

/// Inverse metric at p; requires |det g(p)| above the degeneracy epsilon.
Mat3J metric_inverse(const Mat3J& g, double eps = kDegeneracyEpsilon);
Mat3J metric_inverse(const MetricField& g, const ChartPoint& p, double eps = kDegeneracyEpsilon);

/// Levi-Civita connection coefficients from the coordinate formula
/// Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij).
Christoffel christoffel(const MetricField& g, const ChartPoint& p);
Christoffel christoffel_from_jets(const Mat3J& G);

/// Same coefficients with all metric derivatives taken by central
/// differences; cross-validation oracle only.
std::array<Mat3<double>, 3> christoffel_finite_difference(const MetricField& g,
                                                          const ChartPoint& p, double h);

/// (nabla_X Y)^k = X^i (d_i Y^k + Gamma^k_ij Y^j) at p.
Vec3J covariant_derivative_vector(const MetricField& g, const VectorField& X,
                                  const VectorField& Y, const ChartPoint& p);
/// nabla_X Y as a derived field (budget drops by one).
VectorField covariant_derivative_field(const MetricField& g, const VectorField& X,
                                       const VectorField& Y);

Vec3J lie_bracket(const VectorField& X, const VectorField& Y, const ChartPoint& p);
VectorField lie_bracket_field(const VectorField& X, const VectorField& Y);

/// X(f) as a derived scalar field.
ScalarField directional_derivative_field(const VectorField& X, const ScalarField& f);
Jet3 directional_derivative(const VectorField& X, const ScalarField& f, const ChartPoint& p);

/// (L_xi T)(Y) = [xi, T Y] - T [xi, Y] on coordinate basis vectors.
Mat3J lie_derivative_tensor11(const VectorField& xi, const Tensor11Field& T, const ChartPoint& p);
Tensor11Field lie_derivative_tensor11_field(const VectorField& xi, const Tensor11Field& T);

/// Definitional curvature: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z
/// - nabla_[X,Y] Z, with the inner derivatives taken as fields.
Vec3J riemann_apply(const MetricField& g, const VectorField& X, const VectorField& Y,
                    const VectorField& Z, const ChartPoint& p);

/// Coordinate curvature tensor from Gamma and its jet derivatives.
RiemannTensor riemann_tensor(const MetricField& g, const ChartPoint& p);
/// Contraction of a precomputed tensor with pointwise vector values.
Vec3J riemann_contract(const RiemannTensor& R, const Vec3J& X, const Vec3J& Y, const Vec3J& Z);

/// Ricci operator Q (an endomorphism matrix) and scalar curvature tau = tr Q.
/// Ric(u,v) is the trace of w -> R(w,u)v, which equals the signed-frame
/// contraction sum_i eps_i g(R(u,e_i)e_i, v); Q = g^{-1} Ric.
std::pair<Mat3J, Jet3> ricci_and_scalar(const MetricField& g, const ChartPoint& p);

/// (grad f)^i = g^ij d_j f.
Vec3J gradient_field(const MetricField& g, const ScalarField& f, const ChartPoint& p);
VectorField gradient_vector_field(const MetricField& g, const ScalarField& f);

struct LaplacianForms {
    double frame_form = 0.0;      // sum_i eps_i (e_i e_i f - (nabla_{e_i} e_i) f)
    double divergence_form = 0.0; // |det g|^{-1/2} d_i (|det g|^{1/2} g^ij d_j f)
};
LaplacianForms laplacian_signed_frame(const MetricField& g, const SignedFrame& frame,
                                      const ScalarField& f, const ChartPoint& p);

/// d eta (X, Y).  The half convention 1/2 (X(eta(Y)) - Y(eta(X)) - eta([X,Y]))
/// is the one compatible with d eta(X,Y) = g(X, phi Y); the unnormalized
/// convention (no 1/2) is used for the volume-form nondegeneracy check.
Jet3 exterior_derivative_oneform(const OneForm& eta, const VectorField& X, const VectorField& Y,
                                 const ChartPoint& p, bool half_convention = true);

} // namespace pcv

#endif
