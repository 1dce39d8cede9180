#pragma once

// Geometric and algebraic primitives: R^4 <-> quaternion identification,
// the anti-self-dual 2-form basis, SO(3)/so(3) operations and small
// symmetric eigenproblems.

#include <Eigen/Dense>

#include <array>
#include <cstdint>

namespace ymland {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

// A 2-form on R^4 by its coefficients on dx^a ^ dx^b, (a,b) ordered
// (12, 13, 14, 23, 24, 34).
using TwoForm = std::array<double, 6>;

// Coefficients on the anti-self-dual basis
//   w1- = dx1^dx2 - dx3^dx4,
//   w2- = dx1^dx3 + dx2^dx4,
//   w3- = dx1^dx4 - dx2^dx3.
// The basis is orthogonal with (wa-, wb-) = 2 dab, so a form with
// coefficients c has squared norm 2*|c|^2.
using AsdCoeffs = Vec3;

/// Hodge star on 2-forms (flat metric, orientation dx1^dx2^dx3^dx4).
TwoForm hodge_star(const TwoForm& w);

/// Anti-self-dual projection (w - *w)/2, expressed on the w_k- basis.
AsdCoeffs asd_project(const TwoForm& w);

/// Expands ASD coefficients back into dx^a ^ dx^b coordinates.
TwoForm asd_to_two_form(const AsdCoeffs& c);

/// d(beta_k-) of the primitive 1-forms beta_1- = x1 dx2 - x3 dx4,
/// beta_2- = x1 dx3 + x2 dx4, beta_3- = x1 dx4 - x2 dx3; equals the k-th
/// ASD basis vector. k in {1,2,3}, else std::out_of_range.
AsdCoeffs exterior_derivative_beta(int k);

/// hat: R^3 -> so(3), v -> antisymmetric matrix with hat(v)w = v x w.
Mat3 hat(const Vec3& v);

/// vee: inverse of hat on antisymmetric matrices.
Vec3 vee(const Mat3& k);

/// Rodrigues exponential so(3) -> SO(3).
Mat3 so3_exp(const Vec3& xi);

/// Geodesic distance on SO(3): the rotation angle of Ra^T Rb in [0, pi].
double so3_distance(const Mat3& Ra, const Mat3& Rb);

// Spectrum of a symmetric 3x3 matrix: eigenvalues mu1 >= mu2 >= mu3 and an
// orthonormal frame Q in SO(3) with S = Q diag(mu) Q^T.
struct SymSpectrum {
    Vec3 mu;
    Mat3 Q;
};

/// Eigendecomposition of a symmetric 3x3 matrix by cyclic Jacobi sweeps
/// (fixed sweep order, deterministic also for degenerate spectra).
/// Requires ||S - S^T|| <= 1e-10 ||S||, else std::invalid_argument.
SymSpectrum sym_eigen(const Mat3& S);

// Rotation-constrained singular decomposition M = U diag(sigma) V^T with
// U, V in SO(3); sigma1 >= sigma2 >= |sigma3| and sigma3 carries the sign
// of det M.
struct SpecialSvd {
    Mat3 U;
    Vec3 sigma;
    Mat3 V;
};

SpecialSvd special_svd(const Mat3& m);

}  // namespace ymland
