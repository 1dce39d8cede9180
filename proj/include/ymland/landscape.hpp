#pragma once

// The interaction landscape: the self-interaction energy F(p), the 3x3
// interaction matrix M (volume and boundary routes), its spectrum, the
// Gamma/G landscape functions, and boundary-asymptotics probes.

#include "ymland/boundary.hpp"
#include "ymland/core.hpp"
#include "ymland/quadrature.hpp"

#include <string>
#include <vector>

namespace ymland {

/// F(p) = Int_{B^4} |(dh_p)^-|^2 dx. Requires |p| <= 0.99.
IntegralResult F_value(const Vec4& p, const QuadratureSpec& spec);

/// Central finite differences of F_value with step 1e-4 * (1 - |p|).
Vec4 F_grad(const Vec4& p, const QuadratureSpec& spec);

struct InteractionMatrix {
    Mat3 M = Mat3::Zero();
    SymSpectrum spectrum;  // of M^t M, mu1 >= mu2 >= mu3
    double detM = 0.0;
    Vec4 p = Vec4::Zero();
    double est_rel_error = 0.0;
    long nodes_used = 0;
    bool converged = true;
};

InteractionMatrix make_interaction(const Mat3& m, const Vec4& p);

/// m_ij = Int_{B^4} ((dB_{0,j})^-, (dh_{p,i})^-) dx, the volume route.
/// Requires |p| <= 0.99.
InteractionMatrix M_volume(const BoundarySpec& spec, const Vec4& p, const QuadratureSpec& quad);

/// m_ij = -Int_{S^3} i*(dB_{0,j})^- ^ i*(h_{p,i}), the Stokes route.
/// Requires |p| <= 0.9.
InteractionMatrix M_boundary(const BoundarySpec& spec, const Vec4& p, const QuadratureSpec& quad);

/// M(base, p) + pi^2 H(p) A: the synthesized-family decomposition. The base
/// part needs quadrature only when the base is nonzero; exact otherwise.
InteractionMatrix M_decomposed(const BoundarySpec& spec, const Vec4& p, const QuadratureSpec& quad);

// Spectrum-derived landscape values at one p. Gamma values are the signed
// square-root combinations; each G equals the matching Gamma^2 / F.
struct LandscapeSample {
    Vec4 p;
    double F = 0.0;
    InteractionMatrix M;
    double gamma1p = 0.0, gamma1m = 0.0, gamma2p = 0.0, gamma2m = 0.0, gamma3m = 0.0;
    double g1p = 0.0, g1m = 0.0, g2p = 0.0, g2m = 0.0, g3m = 0.0, g10 = 0.0, g20 = 0.0;
};

LandscapeSample landscape_sample(const BoundarySpec& spec, const Vec4& p, const QuadratureSpec& quad);

// Least-squares log-log fit value ~ constant * d^slope along a decreasing
// d-sequence.
struct AsymptoticFit {
    std::vector<double> d;
    std::vector<double> value;
    double slope = 0.0;
    double constant = 0.0;  // fitted prefactor
};

enum class ProbeQuantity { F, GradF, MEntryMax };

/// Evaluates the quantity at p = (1 - d) * direction for each d and fits
/// slope/constant in log-log by least squares. For MEntryMax the value is
/// max_ij |m_ij| of the given spec's volume-route matrix.
AsymptoticFit asymptotic_probe(ProbeQuantity what, const Vec4& direction, const std::vector<double>& d_list,
                               const BoundarySpec& spec, const QuadratureSpec& quad);

/// Degeneracy tolerance for deciding mu_i = mu_j and mu_3 = 0: 1e-9 * mu_1.
double mu_tolerance(const Vec3& mu);

/// Sign of det M with tolerance 1e-10 * ||M||^3; 0 within tolerance.
int det_sign(const Mat3& m);

}  // namespace ymland
