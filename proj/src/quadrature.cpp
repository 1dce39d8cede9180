#include "ymland/quadrature.hpp"

#include "ymland/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ymland {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev initial guess, Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

Mat4 align_minus_e4_to(const Vec4& direction) {
    const double norm = direction.norm();
    if (norm < 1e-13) return Mat4::Identity();
    const Vec4 b = direction / norm;
    const Vec4 a(0.0, 0.0, 0.0, -1.0);
    const Vec4 s = a + b;
    if (s.norm() < 1e-8) {
        // b = e4: half turn in the (x3, x4) plane.
        Mat4 r = Mat4::Identity();
        r(2, 2) = -1.0;
        r(3, 3) = -1.0;
        return r;
    }
    const Vec4 u = s.normalized();
    // Two reflections: across u (maps a to b up to sign), then across b.
    const Mat4 h1 = 2.0 * u * u.transpose() - Mat4::Identity();
    const Mat4 h2 = 2.0 * b * b.transpose() - Mat4::Identity();
    return h2 * h1;
}

namespace {

struct Kahan {
    double sum = 0.0;
    double c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

[[noreturn]] void throw_nonfinite(const char* where, const Vec4& x) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s: non-finite integrand at node (%.17g, %.17g, %.17g, %.17g)",
                  where, x[0], x[1], x[2], x[3]);
    throw std::domain_error(buf);
}

// Panels on [0, pi] graded geometrically toward both endpoints, with a
// uniformly split middle band. Smallest end panel has width pi * 2^-(d+2).
std::vector<double> psi_breakpoints(int depth) {
    std::vector<double> b;
    b.push_back(0.0);
    for (int j = depth + 2; j >= 3; --j) b.push_back(M_PI * std::ldexp(1.0, -j));
    const int m = 1 << std::min(depth / 2, 5);
    for (int i = 0; i <= m; ++i) b.push_back(0.25 * M_PI + 0.5 * M_PI * i / m);
    for (int j = 3; j <= depth + 2; ++j) b.push_back(M_PI * (1.0 - std::ldexp(1.0, -j)));
    b.push_back(M_PI);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

// Radial breakpoints on [0, 1], graded toward r = 1.
std::vector<double> radial_breakpoints(int depth) {
    std::vector<double> b;
    b.push_back(0.0);
    for (int j = 1; j <= depth; ++j) b.push_back(1.0 - std::ldexp(1.0, -j));
    b.push_back(1.0);
    return b;
}

struct WeightedNode {
    Vec4 y;   // position (on S^3 for sphere rules; scaled by r for ball rules)
    double w;
};

// Product rule on S^3 at the given grading depth. Node order is fixed:
// psi-panel, psi, theta, phi.
std::vector<WeightedNode> s3_rule(const QuadratureSpec& spec, int depth, const Mat4& frame) {
    const std::vector<double> pb = psi_breakpoints(depth);
    const int n_theta = spec.theta_order + 2 * depth;
    const int n_phi = spec.phi_points + 4 * depth;

    std::vector<double> gx, gw, tx, tw;
    gauss_legendre(spec.psi_order, gx, gw);
    gauss_legendre(n_theta, tx, tw);

    std::vector<WeightedNode> nodes;
    nodes.reserve((pb.size() - 1) * gx.size() * tx.size() * n_phi);
    const double phi_w = 2.0 * M_PI / n_phi;
    const bool rotate = !frame.isIdentity(0.0);

    for (std::size_t pp = 0; pp + 1 < pb.size(); ++pp) {
        const double a = pb[pp], b = pb[pp + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t ip = 0; ip < gx.size(); ++ip) {
            const double psi = mid + half * gx[ip];
            const double wpsi = half * gw[ip] * std::sin(psi) * std::sin(psi);
            const double cpsi = std::cos(psi), spsi = std::sin(psi);
            for (std::size_t it = 0; it < tx.size(); ++it) {
                const double theta = 0.5 * M_PI + 0.5 * M_PI * tx[it];
                const double wtheta = 0.5 * M_PI * tw[it] * std::sin(theta);
                const double ctheta = std::cos(theta), stheta = std::sin(theta);
                for (int iphi = 0; iphi < n_phi; ++iphi) {
                    const double phi = phi_w * iphi;
                    Vec4 y(spsi * stheta * std::cos(phi), spsi * stheta * std::sin(phi),
                           spsi * ctheta, cpsi);
                    if (rotate) y = frame * y;
                    nodes.push_back({y, wpsi * wtheta * phi_w});
                }
            }
        }
    }
    return nodes;
}

Eigen::VectorXd eval_rule(const std::vector<WeightedNode>& nodes, const VectorField& f, int n_comp,
                          const char* where) {
    std::vector<Kahan> acc(n_comp);
    std::vector<double> buf(n_comp);
    for (const WeightedNode& node : nodes) {
        f(node.y, buf.data());
        for (int c = 0; c < n_comp; ++c) {
            if (!std::isfinite(buf[c])) throw_nonfinite(where, node.y);
            acc[c].add(node.w * buf[c]);
        }
    }
    Eigen::VectorXd out(n_comp);
    for (int c = 0; c < n_comp; ++c) out[c] = acc[c].sum;
    return out;
}

Eigen::VectorXd s3_value(const VectorField& f, int n_comp, const QuadratureSpec& spec, int depth,
                         const Mat4& frame, long& nodes_used) {
    const std::vector<WeightedNode> nodes = s3_rule(spec, depth, frame);
    nodes_used += static_cast<long>(nodes.size());
    return eval_rule(nodes, f, n_comp, "integrate_s3");
}

Eigen::VectorXd b4_value(const VectorField& f, int n_comp, const QuadratureSpec& spec, int depth,
                         const Mat4& frame, long& nodes_used) {
    const std::vector<double> rb = radial_breakpoints(depth);
    std::vector<double> rx, rw;
    gauss_legendre(spec.radial_order, rx, rw);
    const std::vector<WeightedNode> sphere = s3_rule(spec, depth, frame);

    std::vector<Kahan> acc(n_comp);
    std::vector<double> buf(n_comp);
    for (std::size_t rp = 0; rp + 1 < rb.size(); ++rp) {
        const double half = 0.5 * (rb[rp + 1] - rb[rp]), mid = 0.5 * (rb[rp] + rb[rp + 1]);
        for (std::size_t ir = 0; ir < rx.size(); ++ir) {
            const double r = mid + half * rx[ir];
            const double wr = half * rw[ir] * r * r * r;
            for (const WeightedNode& node : sphere) {
                const Vec4 x = r * node.y;
                f(x, buf.data());
                for (int c = 0; c < n_comp; ++c) {
                    if (!std::isfinite(buf[c])) throw_nonfinite("integrate_b4", x);
                    acc[c].add(wr * node.w * buf[c]);
                }
            }
        }
    }
    nodes_used += static_cast<long>(rb.size() - 1) * static_cast<long>(rx.size()) *
                  static_cast<long>(sphere.size());
    Eigen::VectorXd out(n_comp);
    for (int c = 0; c < n_comp; ++c) out[c] = acc[c].sum;
    return out;
}

using LevelEval = std::function<Eigen::VectorXd(int depth, long& nodes_used)>;

VectorIntegralResult refine_ladder(const LevelEval& level, const QuadratureSpec& spec) {
    VectorIntegralResult res;
    res.nodes_used = 0;
    if (spec.fixed_depth >= 0) {
        res.value = level(spec.fixed_depth, res.nodes_used);
        res.est_rel_error = 0.0;
        res.converged = true;
        return res;
    }
    int depth = std::max(1, spec.min_depth);
    Eigen::VectorXd prev = level(depth, res.nodes_used);
    for (depth = std::max(1, spec.min_depth) + 1; depth <= spec.max_depth; ++depth) {
        const Eigen::VectorXd cur = level(depth, res.nodes_used);
        const double scale = std::max(cur.norm(), 1e-300);
        const double est = (cur - prev).norm() / scale;
        if (est <= spec.target_rel_tol) {
            res.value = cur;
            res.est_rel_error = est;
            res.converged = true;
            return res;
        }
        prev = cur;
        res.est_rel_error = est;
    }
    res.value = prev;
    res.converged = false;  // budget exhausted: best value + flag
    return res;
}

VectorField wrap_scalar(const ScalarField& f) {
    return [&f](const Vec4& x, double* out) { out[0] = f(x); };
}

IntegralResult to_scalar(const VectorIntegralResult& v) {
    return IntegralResult{v.value[0], v.est_rel_error, v.nodes_used, v.converged};
}

}  // namespace

VectorIntegralResult integrate_s3_multi(const VectorField& f, int n_comp, const QuadratureSpec& spec,
                                        const Mat4& frame) {
    return refine_ladder(
        [&](int depth, long& nodes) { return s3_value(f, n_comp, spec, depth, frame, nodes); }, spec);
}

VectorIntegralResult integrate_b4_multi(const VectorField& f, int n_comp, const QuadratureSpec& spec,
                                        const Mat4& frame) {
    return refine_ladder(
        [&](int depth, long& nodes) { return b4_value(f, n_comp, spec, depth, frame, nodes); }, spec);
}

IntegralResult integrate_s3(const ScalarField& f, const QuadratureSpec& spec, const Mat4& frame) {
    return to_scalar(integrate_s3_multi(wrap_scalar(f), 1, spec, frame));
}

IntegralResult integrate_b4(const ScalarField& f, const QuadratureSpec& spec, const Mat4& frame) {
    return to_scalar(integrate_b4_multi(wrap_scalar(f), 1, spec, frame));
}

IntegralResult integrate_b4_mc(const ScalarField& f, const QuadratureSpec& spec) {
    if (spec.mc_samples <= 0) throw std::invalid_argument("integrate_b4_mc: mc_samples must be > 0");
    SplitMix64 rng(spec.seed);
    Kahan sum, sumsq;
    for (long i = 0; i < spec.mc_samples; ++i) {
        const Vec4 x = random_ball4(rng);
        const double v = f(x);
        if (!std::isfinite(v)) throw_nonfinite("integrate_b4_mc", x);
        sum.add(v);
        sumsq.add(v * v);
    }
    const double n = static_cast<double>(spec.mc_samples);
    const double vol = 0.5 * M_PI * M_PI;
    const double mean = sum.sum / n;
    const double var = std::max(0.0, sumsq.sum / n - mean * mean);
    IntegralResult res;
    res.value = vol * mean;
    const double se = vol * std::sqrt(var / n);
    res.est_rel_error = se / std::max(std::abs(res.value), 1e-300);
    res.nodes_used = spec.mc_samples;
    res.converged = true;
    return res;
}

}  // namespace ymland
