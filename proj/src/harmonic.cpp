#include "ymland/harmonic.hpp"

#include <cmath>
#include <stdexcept>

namespace ymland {

namespace {

void check_args(const Vec4& p, int i, const Vec4& x) {
    if (i < 1 || i > 4) throw std::out_of_range("alpha: component index must be in 1..4");
    if (p.norm() >= 1.0) throw std::invalid_argument("alpha: p must lie in the open unit ball");
    if (x.norm() > 1.0 + 1e-12) throw std::invalid_argument("alpha: x must lie in the closed unit ball");
}

// s(x) = |p|^2 |x - p*|^2 = 1 - 2 x.p + |p|^2 |x|^2, computed as
// (1 - x.p)^2 + |p ^ x|^2 (cancellation-free; equals (1-|p||x|)^2 > 0 at worst).
double s_of(const Vec4& p, const Vec4& x) {
    const double one_minus = 1.0 - x.dot(p);
    double wedge = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            const double w = p[a] * x[b] - p[b] * x[a];
            wedge += w * w;
        }
    return one_minus * one_minus + wedge;
}

}  // namespace

double alpha_closed(const Vec4& p, int i, const Vec4& x) {
    check_args(p, i, x);
    const double s = s_of(p, x);
    return (x[i - 1] - p[i - 1] * x.squaredNorm()) / (s * s);
}

Vec4 alpha_grad(const Vec4& p, int i, const Vec4& x) {
    check_args(p, i, x);
    const double s = s_of(p, x);
    const double s2 = s * s, s3 = s2 * s;
    const double num = x[i - 1] - p[i - 1] * x.squaredNorm();
    const double psq = p.squaredNorm();
    Vec4 g;
    for (int j = 0; j < 4; ++j) {
        const double ds = 2.0 * (psq * x[j] - p[j]);
        const double dnum = (j == i - 1 ? 1.0 : 0.0) - 2.0 * p[i - 1] * x[j];
        g[j] = dnum / s2 - 2.0 * num * ds / s3;
    }
    return g;
}

double alpha_image_three_term(const Vec4& p, int i, const Vec4& x, double p_min) {
    check_args(p, i, x);
    const double pn2 = p.squaredNorm();
    if (std::sqrt(pn2) < p_min)
        throw std::domain_error("alpha_image_three_term: |p| below the small-|p| cutoff");
    const Vec4 pstar = p / pn2;
    const Vec4 d = x - pstar;
    const double dn2 = d.squaredNorm();
    const double pn4 = pn2 * pn2;
    const double pn6 = pn4 * pn2;
    return -p[i - 1] / (pn4 * dn2) + d[i - 1] / (pn4 * dn2 * dn2) -
           2.0 * p[i - 1] * p.dot(d) / (pn6 * dn2 * dn2);
}

Vec4 alpha_grad_image_five_term(const Vec4& p, int i, const Vec4& x, double p_min) {
    check_args(p, i, x);
    const double pn2 = p.squaredNorm();
    if (std::sqrt(pn2) < p_min)
        throw std::domain_error("alpha_grad_image_five_term: |p| below the small-|p| cutoff");
    const Vec4 pstar = p / pn2;
    const Vec4 d = x - pstar;
    const double dn2 = d.squaredNorm();
    const double dn4 = dn2 * dn2;
    const double dn6 = dn4 * dn2;
    const double pn4 = pn2 * pn2;
    const double pn6 = pn4 * pn2;
    const double pi_ = p[i - 1];
    const double di = d[i - 1];
    const double pd = p.dot(d);
    Vec4 g;
    for (int j = 0; j < 4; ++j) {
        const double dj = d[j];
        g[j] = 2.0 * pi_ * dj / (pn4 * dn4) + (j == i - 1 ? 1.0 : 0.0) / (pn4 * dn4) -
               4.0 * di * dj / (pn4 * dn6) - 2.0 * pi_ * p[j] / (pn6 * dn4) +
               8.0 * pi_ * dj * pd / (pn6 * dn6);
    }
    return g;
}

IntegralResult alpha_poisson(const Vec4& p, int i, const Vec4& x, const QuadratureSpec& spec) {
    check_args(p, i, x);
    if (x.norm() >= 1.0 - 1e-6)
        throw std::invalid_argument("alpha_poisson: x too close to the boundary for the Poisson kernel");
    const double pref = (1.0 - x.squaredNorm()) / (2.0 * M_PI * M_PI);
    const auto f = [&](const Vec4& y) {
        const double ky = (x - y).squaredNorm();
        const double py = (y - p).squaredNorm();
        return pref / (ky * ky) * (y[i - 1] - p[i - 1]) / (py * py);
    };
    // The sharper of the two kernels (toward p or toward x) goes to the
    // psi = pi grid pole; the milder one must still be resolved by the
    // middle-band panels, so the ladder starts deep enough for its scale.
    const bool p_sharper = p.norm() >= x.norm();
    const Vec4 align_dir = p_sharper ? p : x;
    const double mild_scale = 1.0 - std::min(p.norm(), x.norm());
    QuadratureSpec local = spec;
    local.min_depth = std::max(local.min_depth,
                               2 * static_cast<int>(std::ceil(std::log2(1.0 / mild_scale))) + 2);
    local.max_depth = std::max(local.max_depth, local.min_depth + 3);
    return integrate_s3(f, local, align_minus_e4_to(align_dir));
}

OneForms3 h_oneforms(const Vec4& p, const Vec4& x) {
    const double a1 = alpha_closed(p, 1, x);
    const double a2 = alpha_closed(p, 2, x);
    const double a3 = alpha_closed(p, 3, x);
    const double a4 = alpha_closed(p, 4, x);
    return OneForms3{{{-a2, a1, a4, -a3}, {-a3, -a4, a1, a2}, {-a4, a3, -a2, a1}}};
}

Mat3 dh_asd(const Vec4& p, const Vec4& x) {
    Mat4 da;  // da(i,j) = d alpha_{p,i} / dx_j
    for (int i = 0; i < 4; ++i) da.row(i) = alpha_grad(p, i + 1, x).transpose();
    const double h0 = 0.5 * (da(0, 0) + da(1, 1) + da(2, 2) + da(3, 3));
    const double h1 = 0.5 * (-da(0, 3) + da(1, 2) - da(2, 1) + da(3, 0));
    const double h2 = 0.5 * (da(0, 2) + da(1, 3) - da(2, 0) - da(3, 1));
    const double h3 = 0.5 * (-da(0, 1) + da(1, 0) + da(2, 3) - da(3, 2));
    Mat3 m;
    m << h0, h1, h2, -h1, h0, h3, -h2, -h3, h0;
    return m;
}

double dh_norm_sq(const Vec4& p, const Vec4& x) {
    const Mat3 m = dh_asd(p, x);
    return 2.0 * m.squaredNorm();
}

}  // namespace ymland
