#pragma once

// Deterministic integration over S^3 and B^4 with error control, plus a
// seeded Monte Carlo fallback.
//
// S^3 is parameterized by angles (psi, theta, phi) with measure
// sin^2(psi) sin(theta) dpsi dtheta dphi; Gauss-Legendre rules in psi and
// theta, a periodic trapezoid rule in phi. B^4 adds a Gauss-Legendre radial
// factor with the r^3 Jacobian. Integrands that peak near the boundary or
// near a pole are handled by panels graded geometrically toward r = 1 and
// toward psi in {0, pi}; the grading depth increases until an
// order-doubling comparison meets the target tolerance (or a fixed depth is
// pinned, which makes the node set independent of the integrand).
//
// Summation is compensated (Kahan) in a fixed traversal order: identical
// spec + integrand gives a bit-identical value.

#include "ymland/core.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace ymland {

struct QuadratureSpec {
    int radial_order = 8;   // Gauss-Legendre points per radial panel
    int psi_order = 10;     // Gauss-Legendre points per psi panel
    int theta_order = 10;
    int phi_points = 20;
    long mc_samples = 200000;
    std::uint64_t seed = 0x5eedULL;
    double target_rel_tol = 1e-9;
    int min_depth = 1;      // first grading depth the ladder evaluates
    int max_depth = 9;      // refinement-ladder budget
    int fixed_depth = -1;   // >= 0 pins the grading depth (no ladder)
};

struct IntegralResult {
    double value = 0.0;
    double est_rel_error = 0.0;
    long nodes_used = 0;
    bool converged = true;
};

struct VectorIntegralResult {
    Eigen::VectorXd value;
    double est_rel_error = 0.0;
    long nodes_used = 0;
    bool converged = true;
};

using ScalarField = std::function<double(const Vec4&)>;
// Writes n_comp values at x into out (not accumulated).
using VectorField = std::function<void(const Vec4&, double* out)>;

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// A rotation taking -e4 to the given unit direction (identity for zero
/// input). Used to align an integrand's concentration direction with the
/// psi = pi grid pole; exact change of variables on S^3 / B^4.
Mat4 align_minus_e4_to(const Vec4& direction);

IntegralResult integrate_s3(const ScalarField& f, const QuadratureSpec& spec,
                            const Mat4& frame = Mat4::Identity());
IntegralResult integrate_b4(const ScalarField& f, const QuadratureSpec& spec,
                            const Mat4& frame = Mat4::Identity());

VectorIntegralResult integrate_s3_multi(const VectorField& f, int n_comp, const QuadratureSpec& spec,
                                        const Mat4& frame = Mat4::Identity());
VectorIntegralResult integrate_b4_multi(const VectorField& f, int n_comp, const QuadratureSpec& spec,
                                        const Mat4& frame = Mat4::Identity());

/// Seeded uniform-ball Monte Carlo estimate; est_rel_error is the standard
/// error over |value|. Deterministic for a fixed seed.
IntegralResult integrate_b4_mc(const ScalarField& f, const QuadratureSpec& spec);

}  // namespace ymland
