#include "ymland/landscape.hpp"

#include "ymland/harmonic.hpp"

#include <cmath>
#include <stdexcept>

namespace ymland {

namespace {

void check_p(const Vec4& p, double rmax, const char* where) {
    if (p.norm() > rmax)
        throw std::invalid_argument(std::string(where) + ": |p| exceeds the supported radius");
}

double sqrt_mu(double mu) { return std::sqrt(std::max(mu, 0.0)); }

}  // namespace

double mu_tolerance(const Vec3& mu) { return 1e-9 * std::max(mu[0], 0.0); }

int det_sign(const Mat3& m) {
    const double d = m.determinant();
    const double n = m.norm();
    const double tol = 1e-10 * n * n * n;
    if (d > tol) return 1;
    if (d < -tol) return -1;
    return 0;
}

IntegralResult F_value(const Vec4& p, const QuadratureSpec& spec) {
    check_p(p, 0.99, "F_value");
    const Mat4 frame = align_minus_e4_to(p);
    return integrate_b4([&p](const Vec4& x) { return dh_norm_sq(p, x); }, spec, frame);
}

Vec4 F_grad(const Vec4& p, const QuadratureSpec& spec) {
    check_p(p, 0.99, "F_grad");
    const double h = 1e-4 * (1.0 - p.norm());
    Vec4 g;
    for (int i = 0; i < 4; ++i) {
        Vec4 pp = p, pm = p;
        pp[i] += h;
        pm[i] -= h;
        g[i] = (F_value(pp, spec).value - F_value(pm, spec).value) / (2.0 * h);
    }
    return g;
}

InteractionMatrix make_interaction(const Mat3& m, const Vec4& p) {
    InteractionMatrix out;
    out.M = m;
    out.spectrum = sym_eigen(m.transpose() * m);
    out.detM = m.determinant();
    out.p = p;
    return out;
}

InteractionMatrix M_volume(const BoundarySpec& spec, const Vec4& p, const QuadratureSpec& quad) {
    check_p(p, 0.99, "M_volume");
    const auto f = [&](const Vec4& x, double* out) {
        const Mat3 dh = dh_asd(p, x);
        const Mat3 cur = curvature_asd(spec, x);
        // (u, v) = 2 sum_k u_k v_k on the ASD basis.
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) out[3 * i + j] = 2.0 * cur.row(j).dot(dh.row(i));
    };
    const VectorIntegralResult r = integrate_b4_multi(f, 9, quad, align_minus_e4_to(p));
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = r.value[3 * i + j];
    InteractionMatrix out = make_interaction(m, p);
    out.est_rel_error = r.est_rel_error;
    out.nodes_used = r.nodes_used;
    out.converged = r.converged;
    return out;
}

InteractionMatrix M_boundary(const BoundarySpec& spec, const Vec4& p, const QuadratureSpec& quad) {
    check_p(p, 0.9, "M_boundary");
    const auto f = [&](const Vec4& y, double* out) {
        const Mat3 cur = curvature_asd(spec, y);
        const OneForms3 hp = h_oneforms(p, y);
        for (int i = 0; i < 3; ++i) {
            const std::array<double, 4>& h = hp[i];
            for (int j = 0; j < 3; ++j) {
                const TwoForm w = asd_to_two_form(cur.row(j));
                // 3-form coefficients of w ^ h on dx^a^dx^b^dx^c, a<b<c.
                const double g123 = w[0] * h[2] - w[1] * h[1] + w[3] * h[0];
                const double g124 = w[0] * h[3] - w[2] * h[1] + w[4] * h[0];
                const double g134 = w[1] * h[3] - w[2] * h[2] + w[5] * h[0];
                const double g234 = w[3] * h[3] - w[4] * h[2] + w[5] * h[1];
                // Pullback to S^3 contracts with the outward normal y.
                out[3 * i + j] = -(g234 * y[0] - g134 * y[1] + g124 * y[2] - g123 * y[3]);
            }
        }
    };
    const VectorIntegralResult r = integrate_s3_multi(f, 9, quad, align_minus_e4_to(p));
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = r.value[3 * i + j];
    InteractionMatrix out = make_interaction(m, p);
    out.est_rel_error = r.est_rel_error;
    out.nodes_used = r.nodes_used;
    out.converged = r.converged;
    return out;
}

InteractionMatrix M_decomposed(const BoundarySpec& spec, const Vec4& p, const QuadratureSpec& quad) {
    Mat3 m = M_PI * M_PI * h_matrix(p).matrix() * spec.synth();
    long nodes = 0;
    double est = 0.0;
    bool converged = true;
    if (!spec.base_is_zero()) {
        const BoundarySpec base_only(spec.base(), Mat3::Zero());
        const InteractionMatrix mb = M_volume(base_only, p, quad);
        m += mb.M;
        nodes = mb.nodes_used;
        est = mb.est_rel_error;
        converged = mb.converged;
    }
    InteractionMatrix out = make_interaction(m, p);
    out.nodes_used = nodes;
    out.est_rel_error = est;
    out.converged = converged;
    return out;
}

LandscapeSample landscape_sample(const BoundarySpec& spec, const Vec4& p, const QuadratureSpec& quad) {
    LandscapeSample s;
    s.p = p;
    s.F = F_value(p, quad).value;
    s.M = M_volume(spec, p, quad);
    const double r1 = sqrt_mu(s.M.spectrum.mu[0]);
    const double r2 = sqrt_mu(s.M.spectrum.mu[1]);
    const double r3 = sqrt_mu(s.M.spectrum.mu[2]);
    s.gamma1p = r1 + r2 + r3;
    s.gamma1m = r1 + r2 - r3;
    s.gamma2p = r1 - r2 - r3;
    s.gamma2m = r1 - r2 + r3;
    s.gamma3m = -r1 + r2 + r3;
    s.g1p = s.gamma1p * s.gamma1p / s.F;
    s.g1m = s.gamma1m * s.gamma1m / s.F;
    s.g2p = s.gamma2p * s.gamma2p / s.F;
    s.g2m = s.gamma2m * s.gamma2m / s.F;
    s.g3m = s.gamma3m * s.gamma3m / s.F;
    s.g10 = (r1 + r2) * (r1 + r2) / s.F;
    s.g20 = (r1 - r2) * (r1 - r2) / s.F;
    return s;
}

AsymptoticFit asymptotic_probe(ProbeQuantity what, const Vec4& direction, const std::vector<double>& d_list,
                               const BoundarySpec& spec, const QuadratureSpec& quad) {
    if (d_list.empty()) throw std::invalid_argument("asymptotic_probe: empty d list");
    for (std::size_t i = 0; i + 1 < d_list.size(); ++i)
        if (d_list[i + 1] >= d_list[i])
            throw std::invalid_argument("asymptotic_probe: d list must be strictly decreasing");
    if (d_list.front() > 0.5 || d_list.back() <= 0.0)
        throw std::invalid_argument("asymptotic_probe: d values must lie in (0, 0.5]");

    const Vec4 dir = direction.normalized();
    AsymptoticFit fit;
    for (double d : d_list) {
        const Vec4 p = (1.0 - d) * dir;
        double v = 0.0;
        switch (what) {
            case ProbeQuantity::F:
                v = F_value(p, quad).value;
                break;
            case ProbeQuantity::GradF:
                v = F_grad(p, quad).norm();
                break;
            case ProbeQuantity::MEntryMax:
                v = M_volume(spec, p, quad).M.cwiseAbs().maxCoeff();
                break;
        }
        fit.d.push_back(d);
        fit.value.push_back(v);
    }

    // Least squares on log v = log C + slope log d.
    const std::size_t n = fit.d.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(fit.d[i]);
        const double ly = std::log(std::max(std::abs(fit.value[i]), 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    fit.slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    fit.constant = std::exp((sy - fit.slope * sx) / n);
    return fit;
}

}  // namespace ymland
