#include "ymland/so3crit.hpp"

#include "ymland/landscape.hpp"
#include "ymland/rng.hpp"

#include <algorithm>
#include <cmath>

namespace ymland {

namespace {

Mat3 skew_part(const Mat3& b) { return 0.5 * (b - b.transpose()); }

CriticalRotation from_lambda(const Mat3& m, const SymSpectrum& sp, const std::array<int, 3>& signs,
                             double tol_lambda, bool singular_route) {
    CriticalRotation cp;
    cp.signs = signs;
    cp.frame = sp.Q;
    for (int i = 0; i < 3; ++i) cp.lambda[i] = signs[i] * std::sqrt(std::max(sp.mu[i], 0.0));
    if (singular_route) cp.lambda[2] = 0.0;

    cp.B = sp.Q * cp.lambda.asDiagonal() * sp.Q.transpose();
    cp.value = cp.lambda.sum();
    cp.hessian_diag = Vec3(-cp.lambda[1] - cp.lambda[2], -cp.lambda[0] - cp.lambda[2],
                           -cp.lambda[0] - cp.lambda[1]);

    // Degenerate exactly when some pair sum lambda_i + lambda_j vanishes;
    // this reproduces the strict-inequality tables case by case.
    int negatives = 0;
    cp.degenerate = false;
    for (int k = 0; k < 3; ++k) {
        if (std::abs(cp.hessian_diag[k]) <= tol_lambda) cp.degenerate = true;
        if (cp.hessian_diag[k] < 0.0) ++negatives;
    }
    cp.morse_index = cp.degenerate ? -1 : negatives;

    if (!singular_route) {
        cp.R0 = cp.B * m.inverse();
    }
    return cp;
}

double stationarity_residual(const Mat3& r, const Mat3& m) { return skew_part(r * m).norm(); }

}  // namespace

std::vector<CriticalRotation> enumerate_critical(const Mat3& m) {
    std::vector<CriticalRotation> out;
    const int ds = det_sign(m);
    const SymSpectrum sp = sym_eigen(m.transpose() * m);
    const double tol_lambda = std::sqrt(mu_tolerance(sp.mu));

    if (ds != 0) {
        // Sign patterns with s1 s2 s3 = sign(det M).
        static const std::array<std::array<int, 3>, 4> plus{{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}};
        static const std::array<std::array<int, 3>, 4> minus{{{1, 1, -1}, {1, -1, 1}, {-1, 1, 1}, {-1, -1, -1}}};
        for (const auto& signs : (ds > 0 ? plus : minus))
            out.push_back(from_lambda(m, sp, signs, tol_lambda, false));
    } else {
        // Rank-deficient route: M = U Sigma V^T with U, V in SO(3) and the
        // third singular value treated as zero; R0 = V diag(e1,e2,e1*e2) U^T.
        const SpecialSvd svd = special_svd(m);
        SymSpectrum sps;
        sps.mu = Vec3(svd.sigma[0] * svd.sigma[0], svd.sigma[1] * svd.sigma[1], 0.0);
        sps.Q = svd.V;
        static const std::array<std::array<int, 3>, 4> pats{{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}};
        for (const auto& signs : pats) {
            CriticalRotation cp = from_lambda(m, sps, signs, tol_lambda, true);
            // det R0 = e1 e2 e3 = +1 forces the third sign.
            Vec3 eps(signs[0], signs[1], signs[0] * signs[1]);
            cp.R0 = svd.V * eps.asDiagonal() * svd.U.transpose();
            cp.signs = {signs[0], signs[1], signs[0] * signs[1]};
            out.push_back(cp);
        }
    }

    std::sort(out.begin(), out.end(),
              [](const CriticalRotation& a, const CriticalRotation& b) { return a.value > b.value; });
    return out;
}

double hessian_check(const Mat3& m, const CriticalRotation& cp) {
    const double h = 1e-4;
    static const std::array<Vec3, 3> basis{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    const auto tau = [&](const Mat3& r) { return (r * m).trace(); };
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Vec3 xi = cp.frame * basis[i];  // P xi_i P^-1 as a rotation axis
        const double fp = tau(so3_exp(h * xi) * cp.R0);
        const double f0 = tau(cp.R0);
        const double fm = tau(so3_exp(-h * xi) * cp.R0);
        const double second = (fp - 2.0 * f0 + fm) / (h * h);
        worst = std::max(worst, std::abs(second - cp.hessian_diag[i]));
        for (int j = i + 1; j < 3; ++j) {
            const Vec3 xj = cp.frame * basis[j];
            const double fpp = tau(so3_exp(h * xi + h * xj) * cp.R0);
            const double fpm = tau(so3_exp(h * xi - h * xj) * cp.R0);
            const double fmp = tau(so3_exp(-h * xi + h * xj) * cp.R0);
            const double fmm = tau(so3_exp(-h * xi - h * xj) * cp.R0);
            const double cross = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            worst = std::max(worst, std::abs(cross));
        }
    }
    return worst;
}

DescentResult descent_oracle(const Mat3& m, int n_starts, std::uint64_t seed) {
    if (n_starts < 1) throw std::invalid_argument("descent_oracle: n_starts must be >= 1");
    const double scale = std::max(m.norm(), 1e-300);
    const double tol = 1e-12 * scale;
    const int max_iter = 300;

    DescentResult res;
    SplitMix64 root(seed);
    for (int s = 0; s < n_starts; ++s) {
        SplitMix64 rng = root.split(static_cast<std::uint64_t>(s));
        Mat3 r = random_rotation(rng);
        bool ok = false;
        for (int it = 0; it < max_iter; ++it) {
            const Mat3 b = r * m;
            const Mat3 k = skew_part(b);
            const double g0 = k.squaredNorm();
            if (std::sqrt(g0) <= tol) {
                ok = true;
                break;
            }
            // Newton on Phi(v) = vee(skew(exp(hat(v)) R M)); the Jacobian
            // column j is vee(skew(hat(e_j) B)).
            Mat3 jac;
            for (int j = 0; j < 3; ++j) {
                Vec3 e = Vec3::Zero();
                e[j] = 1.0;
                jac.col(j) = vee(skew_part(hat(e) * b));
            }
            Vec3 step;
            const double det = std::abs(jac.determinant());
            if (det > 1e-12 * scale * scale * scale) {
                step = -jac.lu().solve(vee(k));
            } else {
                // Near-degenerate Jacobian: steepest descent on |skew|^2.
                step = -jac.transpose() * vee(k);
                step *= 2.0 / std::max(scale, 1e-300);
            }
            const double cap = 0.8 * M_PI;
            if (step.norm() > cap) step *= cap / step.norm();
            // Backtracking on the stationarity residual.
            double t = 1.0;
            bool moved = false;
            for (int ls = 0; ls < 40; ++ls) {
                const Mat3 rn = so3_exp(t * step) * r;
                if (skew_part(rn * m).squaredNorm() < g0 * (1.0 - 1e-4 * t)) {
                    r = rn;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if (!moved) break;
        }
        if (!ok) {
            ++res.n_failed;
            continue;
        }
        ++res.n_converged;
        const double value = (r * m).trace();
        bool merged = false;
        for (DescentCluster& c : res.clusters) {
            if (so3_distance(c.R, r) <= 1e-6) {
                ++c.count;
                merged = true;
                break;
            }
        }
        if (!merged)
            res.clusters.push_back({r, value, 1, stationarity_residual(r, m)});
    }
    std::sort(res.clusters.begin(), res.clusters.end(),
              [](const DescentCluster& a, const DescentCluster& b) { return a.value > b.value; });
    return res;
}

CategoryReport category_report(const Mat3& m, std::optional<double> eta_override) {
    CategoryReport rep;
    const SymSpectrum sp = sym_eigen(m.transpose() * m);
    const double tol = mu_tolerance(sp.mu);
    if (!(sp.mu[0] - sp.mu[1] > tol && sp.mu[1] - sp.mu[2] > tol)) {
        rep.case_tag = "inapplicable: spectrum not strictly separated";
        return rep;
    }
    const double r1 = std::sqrt(std::max(sp.mu[0], 0.0));
    const double r2 = std::sqrt(std::max(sp.mu[1], 0.0));
    const double r3 = std::sqrt(std::max(sp.mu[2], 0.0));
    const int ds = det_sign(m);

    if (ds >= 0) {
        if (r1 > r2 + r3) {
            rep.applicable = true;
            rep.case_tag = "case-1";
            rep.eta = 0.5 * (r1 - r2 - r3);
            rep.cat_lower_bound = 2;
        } else {
            rep.case_tag = "inapplicable: det M >= 0 and sqrt(mu1) <= sqrt(mu2) + sqrt(mu3)";
            return rep;
        }
    } else {
        rep.applicable = true;
        if (r1 < r2 + r3) {
            rep.case_tag = "case-2-extra";
            rep.eta = 0.5 * (-r1 + r2 + r3);
            rep.cat_lower_bound = 3;
        } else {
            rep.case_tag = "case-2";
            rep.eta = r3;
            rep.cat_lower_bound = 2;
        }
    }
    if (eta_override) rep.eta = *eta_override;

    for (const CriticalRotation& cp : enumerate_critical(m))
        if (cp.value > rep.eta) rep.positive_values_above_eta.push_back(cp.value);
    return rep;
}

}  // namespace ymland
