#pragma once

// Boundary connections: a harmonic-polynomial base plus the synthesized
// family B0(A) = base + sum_k a_{kl} beta_k^-, the matrix H(p), and the
// constructive synthesis / non-degeneracy perturbation.

#include "ymland/core.hpp"
#include "ymland/polynomial.hpp"
#include "ymland/quadrature.hpp"

#include <array>

namespace ymland {

class BoundarySpec {
  public:
    /// Zero base, zero synthesis matrix.
    BoundarySpec();

    /// Throws std::invalid_argument if any base component fails the exact
    /// harmonicity check.
    BoundarySpec(std::array<PolyOneForm, 3> base, const Mat3& synth);

    const std::array<PolyOneForm, 3>& base() const { return base_; }
    const Mat3& synth() const { return synth_; }
    bool base_is_zero() const;

    BoundarySpec with_synth(const Mat3& a) const { return BoundarySpec(base_, a); }

  private:
    std::array<PolyOneForm, 3> base_;
    Mat3 synth_;
};

/// ASD curvature of the family at x: entry (l,k) = (d B_{0,l}(A))_k^-(x)
/// = (d base_l)_k^-(x) + a_{kl}.
Mat3 curvature_asd(const BoundarySpec& spec, const Vec4& x);

// H(p) with entry (l,k) = (dh_{p,l})_k^-(0), assembled from alpha_grad at
// the origin. h0 > 0 and det = h0 (h0^2 + h1^2 + h2^2 + h3^2) > 0, so H is
// always invertible.
struct HMatrix {
    double h0 = 0.0, h1 = 0.0, h2 = 0.0, h3 = 0.0;

    Mat3 matrix() const;
    double det() const { return h0 * (h0 * h0 + h1 * h1 + h2 * h2 + h3 * h3); }
};

HMatrix h_matrix(const Vec4& p);

/// Chooses the synthesis matrix A = (pi^2 H(p0))^-1 (target - M(base, p0))
/// so that the interaction matrix of the returned spec at p0 equals target.
BoundarySpec synthesize(const Mat3& target, const Vec4& p0, const std::array<PolyOneForm, 3>& base,
                        const QuadratureSpec& quad);

/// Shifts the synthesis matrix by (pi^2 H(p0))^-1 X with
/// X = (M^t)^-1 Q diag(3mu, 2mu, mu) Q^-1, splitting the spectrum of M^t M
/// into strictly separated eigenvalues for small mu > 0. A singular M is
/// first regularized by an arbitrarily small multiple of the identity.
BoundarySpec perturb_nondegenerate(const BoundarySpec& spec, const Vec4& p0, double mu,
                                   const QuadratureSpec& quad);

}  // namespace ymland
