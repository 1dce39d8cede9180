#pragma once

// The explicit harmonic fields attached to a concentration point p in the
// open unit 4-ball:
//
//   alpha_{p,i}: harmonic on B^4 with boundary trace (x_i - p_i)/|x - p|^4,
//   h_{p,l}    : their quaternionic recombination into three 1-forms,
//   (dh_{p,l})^-: the nine anti-self-dual coefficient fields.
//
// All evaluators are closed-form; quadrature appears only in oracles
// (alpha_poisson) and in integral quantities.

#include "ymland/core.hpp"
#include "ymland/quadrature.hpp"

#include <array>

namespace ymland {

/// alpha_{p,i}(x) for i in 1..4. Requires |p| < 1 and |x| <= 1 + 1e-12.
///
/// Evaluated as (x_i - p_i|x|^2) / s^2 with
/// s = (1 - x.p)^2 + sum_{i<j} (p_i x_j - p_j x_i)^2, the cancellation-free
/// regrouping of the Kelvin-image formula; valid down to p = 0 where
/// alpha_{0,i} = x_i.
double alpha_closed(const Vec4& p, int i, const Vec4& x);

/// Gradient of alpha_{p,i} in x (same closed form, differentiated).
Vec4 alpha_grad(const Vec4& p, int i, const Vec4& x);

/// The Kelvin-image expression as written: three diverging terms in
/// x - p/|p|^2. Requires |p| >= p_min; used as an oracle against
/// alpha_closed.
double alpha_image_three_term(const Vec4& p, int i, const Vec4& x, double p_min = 1e-3);

/// Five-term image-formula gradient, same domain restriction as the
/// three-term value; oracle counterpart of alpha_grad.
Vec4 alpha_grad_image_five_term(const Vec4& p, int i, const Vec4& x, double p_min = 1e-3);

/// Poisson-integral representation
///   (1-|x|^2)/(2 pi^2) Int_{S^3} |x-y|^-4 (y_i-p_i)/|y-p|^4 dy,
/// the independent oracle for alpha_closed. Requires |x| < 1 (kernel is
/// singular at the boundary).
IntegralResult alpha_poisson(const Vec4& p, int i, const Vec4& x, const QuadratureSpec& spec);

// The three 1-forms h_{p,l}; h[l][j] is the dx^j coefficient of h_{p,l+1}.
using OneForms3 = std::array<std::array<double, 4>, 3>;

OneForms3 h_oneforms(const Vec4& p, const Vec4& x);

/// The 3x3 matrix with entry (l,k) = (dh_{p,l})_k^-(x): the w_k- coefficient
/// of the ASD part of dh_{p,l}, assembled from alpha_grad by the nine
/// signed half-sums. Structure: [[h0,h1,h2],[-h1,h0,h3],[-h2,-h3,h0]].
Mat3 dh_asd(const Vec4& p, const Vec4& x);

/// Pointwise integrand of the self-interaction energy:
/// |(dh_p)^-|^2 (x) = 2 * sum_{l,k} dh_asd(p,x)(l,k)^2.
double dh_norm_sq(const Vec4& p, const Vec4& x);

}  // namespace ymland
