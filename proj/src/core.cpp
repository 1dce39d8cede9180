#include "ymland/core.hpp"

#include <cmath>
#include <stdexcept>

namespace ymland {

TwoForm hodge_star(const TwoForm& w) {
    // *e12 = e34, *e13 = -e24, *e14 = e23 and the symmetric counterparts.
    return TwoForm{w[5], -w[4], w[3], w[2], -w[1], w[0]};
}

AsdCoeffs asd_project(const TwoForm& w) {
    return AsdCoeffs(0.5 * (w[0] - w[5]), 0.5 * (w[1] + w[4]), 0.5 * (w[2] - w[3]));
}

TwoForm asd_to_two_form(const AsdCoeffs& c) {
    return TwoForm{c[0], c[1], c[2], -c[2], c[1], -c[0]};
}

AsdCoeffs exterior_derivative_beta(int k) {
    if (k < 1 || k > 3) throw std::out_of_range("exterior_derivative_beta: k must be 1, 2 or 3");
    AsdCoeffs c = AsdCoeffs::Zero();
    c[k - 1] = 1.0;
    return c;
}

Mat3 hat(const Vec3& v) {
    Mat3 k;
    k << 0.0, -v[2], v[1], v[2], 0.0, -v[0], -v[1], v[0], 0.0;
    return k;
}

Vec3 vee(const Mat3& k) { return Vec3(k(2, 1), k(0, 2), k(1, 0)); }

Mat3 so3_exp(const Vec3& xi) {
    const double theta2 = xi.squaredNorm();
    const double theta = std::sqrt(theta2);
    const Mat3 k = hat(xi);
    double a, b;  // R = I + a K + b K^2
    if (theta < 1e-4) {
        // series: sin t / t and (1 - cos t)/t^2
        a = 1.0 - theta2 / 6.0 * (1.0 - theta2 / 20.0);
        b = 0.5 - theta2 / 24.0 * (1.0 - theta2 / 30.0);
    } else {
        a = std::sin(theta) / theta;
        b = (1.0 - std::cos(theta)) / theta2;
    }
    return Mat3::Identity() + a * k + b * (k * k);
}

double so3_distance(const Mat3& Ra, const Mat3& Rb) {
    const double c = ((Ra.transpose() * Rb).trace() - 1.0) / 2.0;
    return std::acos(std::clamp(c, -1.0, 1.0));
}

namespace {

// One Jacobi rotation zeroing A(p,q); accumulates into Q.
void jacobi_rotate(Mat3& a, Mat3& q, int p, int r) {
    const double apq = a(p, r);
    if (apq == 0.0) return;
    const double theta = (a(r, r) - a(p, p)) / (2.0 * apq);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    const double tau = s / (1.0 + c);

    const double app = a(p, p), arr = a(r, r);
    a(p, p) = app - t * apq;
    a(r, r) = arr + t * apq;
    a(p, r) = 0.0;
    a(r, p) = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (i != p && i != r) {
            const double aip = a(i, p), air = a(i, r);
            a(i, p) = a(p, i) = aip - s * (air + tau * aip);
            a(i, r) = a(r, i) = air + s * (aip - tau * air);
        }
        const double qip = q(i, p), qir = q(i, r);
        q(i, p) = qip - s * (qir + tau * qip);
        q(i, r) = qir + s * (qip - tau * qir);
    }
}

double offdiag_sq(const Mat3& a) {
    return a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
}

}  // namespace

SymSpectrum sym_eigen(const Mat3& s) {
    const double scale = s.norm();
    if ((s - s.transpose()).norm() > 1e-10 * std::max(scale, 1e-300))
        throw std::invalid_argument("sym_eigen: input is not symmetric");

    Mat3 a = 0.5 * (s + s.transpose());
    Mat3 q = Mat3::Identity();
    const double tol = 1e-30 * std::max(scale * scale, 1e-300);
    for (int sweep = 0; sweep < 32 && offdiag_sq(a) > tol; ++sweep) {
        jacobi_rotate(a, q, 0, 1);
        jacobi_rotate(a, q, 0, 2);
        jacobi_rotate(a, q, 1, 2);
    }

    // Sort descending; stable index order on ties keeps degenerate frames
    // reproducible.
    std::array<int, 3> idx{0, 1, 2};
    for (int i = 0; i < 2; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (a(idx[j], idx[j]) > a(idx[i], idx[i])) std::swap(idx[i], idx[j]);

    SymSpectrum out;
    for (int i = 0; i < 3; ++i) {
        out.mu[i] = a(idx[i], idx[i]);
        out.Q.col(i) = q.col(idx[i]);
    }
    if (out.Q.determinant() < 0.0) out.Q.col(2) = -out.Q.col(2);
    return out;
}

SpecialSvd special_svd(const Mat3& m) {
    const SymSpectrum sp = sym_eigen(m.transpose() * m);
    SpecialSvd out;
    out.V = sp.Q;
    out.sigma = Vec3(std::sqrt(std::max(sp.mu[0], 0.0)), std::sqrt(std::max(sp.mu[1], 0.0)),
                     std::sqrt(std::max(sp.mu[2], 0.0)));

    const double tiny = 1e-14 * std::max(out.sigma[0], 1e-300);
    Vec3 u0 = m * out.V.col(0);
    Vec3 u1 = m * out.V.col(1);
    if (u0.norm() > tiny)
        u0.normalize();
    else
        u0 = Vec3::UnitX();  // m ~ 0: any frame
    u1 -= u1.dot(u0) * u0;
    if (u1.norm() > tiny) {
        u1.normalize();
    } else {
        u1 = Vec3::UnitY() - Vec3::UnitY().dot(u0) * u0;
        if (u1.norm() < 0.5) u1 = Vec3::UnitZ() - Vec3::UnitZ().dot(u0) * u0;
        u1.normalize();
    }
    out.U.col(0) = u0;
    out.U.col(1) = u1;
    out.U.col(2) = u0.cross(u1);

    // Sign of the last singular value absorbs det m.
    const double s3 = out.U.col(2).dot(m * out.V.col(2));
    out.sigma[2] = s3;
    return out;
}

}  // namespace ymland
