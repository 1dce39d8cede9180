#pragma once

// Complete critical-point theory of tau_M(R) = Tr(R M) on SO(3):
// enumeration via the symmetric square roots of M^t M, Morse indices,
// degeneracy flags, a multistart stationarity oracle, and the
// sublevel-set category report.

#include "ymland/core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ymland {

struct CriticalRotation {
    Mat3 R0 = Mat3::Identity();
    Mat3 B = Mat3::Zero();            // R0 M, symmetric
    std::array<int, 3> signs{1, 1, 1};  // lambda_i = signs[i] * sqrt(mu_i)
    double value = 0.0;               // Tr B
    Vec3 lambda = Vec3::Zero();
    Vec3 hessian_diag = Vec3::Zero();  // (-l2-l3, -l1-l3, -l1-l2) on the P xi_i P^-1 frame
    int morse_index = -1;              // -1 = undefined (degenerate point)
    bool degenerate = false;
    Mat3 frame = Mat3::Identity();     // P with B = P diag(lambda) P^-1
};

/// All critical points of tau_M, ordered by value descending. Handles
/// det M of any sign; an exactly/nearly singular M (det_sign == 0) goes
/// through the rotation-constrained singular decomposition route with the
/// third singular value treated as zero.
std::vector<CriticalRotation> enumerate_critical(const Mat3& m);

/// Max deviation between second finite differences of t -> tau_M(exp(t xi) R0)
/// along the frame directions and the analytic Hessian diagonal; also checks
/// the cross terms vanish. FD step 1e-4.
double hessian_check(const Mat3& m, const CriticalRotation& cp);

struct DescentCluster {
    Mat3 R = Mat3::Identity();
    double value = 0.0;
    int count = 0;           // starts that converged into this cluster
    double residual = 0.0;   // ||skew(RM)|| at the representative
};

struct DescentResult {
    std::vector<DescentCluster> clusters;  // ordered by value descending
    int n_converged = 0;
    int n_failed = 0;
};

/// Multistart stationarity search: damped Newton on vee(skew(RM)) = 0 with
/// backtracking on ||skew(RM)||_F^2 and geodesic retraction, from Haar-
/// uniform seeded starts; converged points are clustered by geodesic
/// distance 1e-6.
DescentResult descent_oracle(const Mat3& m, int n_starts, std::uint64_t seed);

struct CategoryReport {
    bool applicable = false;
    std::string case_tag;              // "case-1", "case-2", "case-2-extra", or reason
    double eta = 0.0;
    std::vector<double> positive_values_above_eta;
    int cat_lower_bound = 0;           // 0 = none
};

/// eta recipe and category lower bound for the sublevel set
/// S(eta) = { R : Tr(R M) >= eta }. Requires mu1 > mu2 > mu3 strictly
/// (within tolerance); otherwise applicable = false.
CategoryReport category_report(const Mat3& m, std::optional<double> eta_override = std::nullopt);

}  // namespace ymland
