#pragma once

// The leading-order reduced energy on the parameter space
// P = B_{1-d0} x SO(3) x (0, lambda0):
//
//   F_eps(p, R, lambda) = 2 lambda^4 F(p) - 4 eps lambda^2 Tr(R M(p)),
//
// with fiber-optimal lambda, critical-point search and classification,
// window selection and flow-invariance margins, and the sublevel-set
// construction over a category-carrying set of rotations.

#include "ymland/boundary.hpp"
#include "ymland/core.hpp"
#include "ymland/landscape.hpp"
#include "ymland/quadrature.hpp"
#include "ymland/so3crit.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ymland {

struct ParamPoint {
    Vec4 p = Vec4::Zero();
    Mat3 R = Mat3::Identity();
    double lambda = 0.0;
};

struct SearchWindow {
    double d0 = 0.5;
    double lambda0 = 0.2475;  // 0.99 * d0 / 2
    double D1 = 0.0;
    double D2 = 0.0;
    double C0 = 1.0;
    bool feasible = true;
    double C4 = 0.0, C5 = 0.0, maxF = 0.0;  // probe-grid extrema behind the recipe
};

/// Pure algebra: 2 l^4 F - 4 eps l^2 tr(RM).
double reduced_energy(double lambda, double f_of_p, double tr_rm, double eps);

struct FiberResult {
    double lambda_star = 0.0;
    double value = 0.0;  // -2 eps^2 Gamma^2 / F
};

/// Fiber-optimal lambda for a positive critical value Gamma = Tr(R0 M):
/// lambda*^2 = eps Gamma / F, value -2 eps^2 Gamma^2 / F. No interior
/// minimum when Gamma <= 0 (returns nullopt).
std::optional<FiberResult> fiber_reduce(double gamma, double eps, double f_of_p);

// Binds a boundary spec to a quadrature tier and caches F(p) / M(p) keyed
// by the exact bits of p. The default tier pins the grading depth so the
// discretized model is a smooth function of p (finite-difference gradients
// are then meaningful to machine precision).
class ReducedModel {
  public:
    ReducedModel(BoundarySpec spec, QuadratureSpec quad);

    double F(const Vec4& p) const;
    const Mat3& M(const Vec4& p) const;
    double energy(const ParamPoint& q, double eps) const;

    const BoundarySpec& spec() const { return spec_; }
    const QuadratureSpec& quad() const { return quad_; }

    /// Quadrature spec with the fixed-depth smooth tier pinned.
    static QuadratureSpec smooth_tier(QuadratureSpec base, int depth = 3);

  private:
    BoundarySpec spec_;
    QuadratureSpec quad_;
    using Key = std::array<double, 4>;
    mutable std::map<Key, double> f_cache_;
    mutable std::map<Key, Mat3> m_cache_;
};

struct ReducedCritical {
    ParamPoint q;
    double epsilon = 0.0;
    double value = 0.0;
    double grad_norm = 0.0;           // FD gradient on the (p, xi, lambda) chart
    std::string classification;        // "min", "saddle", "degenerate", "so3-degenerate"
    int saddle_index = 0;              // negative Hessian directions when a saddle
    double gamma = 0.0;                // Tr(R M(p)) at the point
    double lambda_sq_residual = 0.0;   // lambda^2 - eps gamma / F(p)
    std::array<int, 3> signs{1, 1, 1};
};

enum class SearchStrategy { Minimize, AllFibers };

struct FindOptions {
    int multistart = 32;
    int grid_per_axis = 5;   // AllFibers p-grid (capped at 9)
    std::uint64_t seed = 0x5eedULL;
    double grad_tol_factor = 1e-8;  // target |grad| <= factor * eps^2
    int newton_max_iter = 30;
};

/// Critical points of the reduced energy inside the window.
/// Minimize: multistart fiber-exact minimization over p followed by Newton
/// on the FD-gradient map (p-step 1e-4, xi-step 1e-4, lambda-step 1e-6).
/// AllFibers: p-grid x positive-value critical rotations, fiber reduction,
/// Newton refinement of the branch landscape G = Gamma^2/F, then the same
/// polish and FD-Hessian classification.
/// Throws std::runtime_error naming the violated face if every candidate is
/// attracted to the window boundary.
std::vector<ReducedCritical> find_critical(const ReducedModel& model, const SearchWindow& window,
                                           double eps, SearchStrategy strategy,
                                           const FindOptions& opts = FindOptions{});

/// Window recipe: C5 = min F, C4 = max Gamma1+ over a probe grid in
/// B_{1-d0}; D2 = 2 C4/C5; D1 = D d0^2 with D the largest constant
/// satisfying D^2 d0^4 max F < C0/16; lambda0 = 0.99 d0/2. Sets
/// feasible = false when D1 >= D2.
SearchWindow suggest_window(const ReducedModel& model, double C0, double d0, int grid_per_axis = 4,
                            std::uint64_t seed = 0x5eedULL);

struct FaceReport {
    std::string face;
    double margin = 0.0;   // min signed margin; positive = inequality holds
    int n_inside = 0;      // samples that landed in the sublevel set
    int n_sampled = 0;
    bool vacuous = false;  // empty sublevel slice (margin reported +inf)
};

struct InvarianceReport {
    FaceReport p_face, lambda_lo, lambda_hi;
    bool all_positive = false;
};

/// Samples the three window faces restricted to {F_eps <= -C0 eps^2} and
/// reports the minimum signed FD margin of the flow-invariance
/// inequalities (outward radial derivative > 0; dF/dlambda < 0 at the low
/// face, > 0 at the high face).
InvarianceReport check_flow_invariance(const ReducedModel& model, const SearchWindow& window, double eps,
                                       int n_samples, std::uint64_t seed);

struct StildeReport {
    double eta = 0.0;
    double lambda0 = 0.0;  // (eta eps / F(p0))^{1/2}
    double f_p0 = 0.0;
    CategoryReport category;
    int n_checked = 0;
    int n_violations = 0;
    double max_energy = 0.0;  // max F_eps over the sampled rotation set
    double bound = 0.0;       // -(eta^2/F(p0)) eps^2
};

/// The set {p0} x S(p0, eta) x {lambda0}: computes lambda0, the category
/// report of M(p0), and verifies the sublevel inclusion
/// F_eps(p0, [g], lambda0) <= -(eta^2/F) eps^2 on sampled rotations with
/// Tr(R M) >= eta. Throws std::domain_error when eta exceeds the top
/// critical value (empty set).
StildeReport stilde_set(const ReducedModel& model, const Vec4& p0, double eta, double eps,
                        int n_samples = 100, std::uint64_t seed = 0x5eedULL);

}  // namespace ymland
