#include "ymland/harmonic.hpp"

#include "ymland/rng.hpp"

#include <doctest.h>

#include <array>
#include <cmath>

using namespace ymland;

namespace {

// Quaternion product (w, x, y, z).
Vec4 qmul(const Vec4& a, const Vec4& b) {
    return Vec4(a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
                a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
                a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
                a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]);
}

double fd_laplacian(const std::function<double(const Vec4&)>& f, const Vec4& x, double h) {
    double acc = -8.0 * f(x);
    for (int j = 0; j < 4; ++j) {
        Vec4 xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        acc += f(xp) + f(xm);
    }
    return acc / (h * h);
}

}  // namespace

TEST_CASE("alpha_closed fixtures") {
    // p = 0: the boundary data x_i extends to x_i
    CHECK(alpha_closed(Vec4::Zero(), 1, Vec4(0.3, 0, 0, 0)) == doctest::Approx(0.3).epsilon(1e-15));

    // boundary trace at |x| = 1
    const Vec4 p(0.2, 0, 0, 0);
    SplitMix64 rng(3);
    for (int t = 0; t < 25; ++t) {
        const Vec4 x = random_unit4(rng);
        for (int i = 1; i <= 4; ++i) {
            const double d2 = (x - p).squaredNorm();
            const double expect = (x[i - 1] - p[i - 1]) / (d2 * d2);
            CHECK(alpha_closed(p, i, x) == doctest::Approx(expect).epsilon(1e-10));
        }
    }

    CHECK_THROWS_AS(alpha_closed(Vec4(1.0, 0, 0, 0), 1, Vec4::Zero()), std::invalid_argument);
    CHECK_THROWS_AS(alpha_closed(Vec4::Zero(), 5, Vec4::Zero()), std::out_of_range);
}

TEST_CASE("boundary trace across |p| up to 0.95") {
    SplitMix64 rng(5);
    for (int t = 0; t < 40; ++t) {
        const Vec4 x = random_unit4(rng);
        const Vec4 p = 0.95 * rng.next_double() * random_unit4(rng);
        const double d2 = (x - p).squaredNorm();
        for (int i = 1; i <= 4; ++i) {
            const double expect = (x[i - 1] - p[i - 1]) / (d2 * d2);
            const double got = alpha_closed(p, i, x);
            CHECK(std::abs(got - expect) <= 1e-10 * (1.0 + std::abs(expect)));
        }
    }
}

TEST_CASE("regrouped form agrees with the image three/five-term expressions") {
    SplitMix64 rng(9);
    for (int t = 0; t < 60; ++t) {
        const double pr = 1e-3 + (0.95 - 1e-3) * rng.next_double();
        const Vec4 p = pr * random_unit4(rng);
        const Vec4 x = 0.98 * random_ball4(rng);
        for (int i = 1; i <= 4; ++i) {
            const double a = alpha_closed(p, i, x);
            const double b = alpha_image_three_term(p, i, x);
            CHECK(std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a)));
            const Vec4 ga = alpha_grad(p, i, x);
            const Vec4 gb = alpha_grad_image_five_term(p, i, x);
            CHECK((ga - gb).norm() <= 1e-8 * (1.0 + ga.norm()));
        }
    }
    CHECK_THROWS_AS(alpha_image_three_term(Vec4(1e-4, 0, 0, 0), 1, Vec4::Zero()), std::domain_error);
}

TEST_CASE("alpha_poisson oracle agreement") {
    QuadratureSpec spec;
    spec.target_rel_tol = 1e-10;

    // odd integrand at the centre
    CHECK(std::abs(alpha_poisson(Vec4::Zero(), 1, Vec4::Zero(), spec).value) < 1e-12);

    // p = (0,0,0,0.5), x = 0, i = 4
    {
        const Vec4 p(0, 0, 0, 0.5);
        const double closed = alpha_closed(p, 4, Vec4::Zero());
        const double poisson = alpha_poisson(p, 4, Vec4::Zero(), spec).value;
        CHECK(std::abs(closed - poisson) <= 1e-6 * (1.0 + std::abs(closed)));
    }

    // near-boundary stress case
    {
        const Vec4 p(0, 0, 0, -0.9);
        QuadratureSpec refined = spec;
        refined.max_depth = 11;
        const double closed = alpha_closed(p, 4, Vec4::Zero());
        const double poisson = alpha_poisson(p, 4, Vec4::Zero(), refined).value;
        CHECK(std::abs(closed - poisson) <= 1e-6 * (1.0 + std::abs(closed)));
    }

    CHECK_THROWS_AS(alpha_poisson(Vec4::Zero(), 1, Vec4(0.9999999, 0, 0, 0), spec),
                    std::invalid_argument);
}

TEST_CASE("alpha_grad fixtures and finite differences") {
    // p = 0 limit: identity Jacobian
    for (int i = 1; i <= 4; ++i) {
        const Vec4 g = alpha_grad(Vec4::Zero(), i, Vec4(0.2, -0.1, 0.05, 0.3));
        for (int j = 0; j < 4; ++j) CHECK(g[j] == doctest::Approx(i - 1 == j ? 1.0 : 0.0).epsilon(1e-12));
    }

    SplitMix64 rng(21);
    const double h = 1e-5;
    for (int t = 0; t < 25; ++t) {
        const Vec4 p = 0.9 * random_ball4(rng);
        const Vec4 x = 0.9 * random_ball4(rng);
        for (int i = 1; i <= 4; ++i) {
            const Vec4 g = alpha_grad(p, i, x);
            for (int j = 0; j < 4; ++j) {
                Vec4 xp = x, xm = x;
                xp[j] += h;
                xm[j] -= h;
                const double fd = (alpha_closed(p, i, xp) - alpha_closed(p, i, xm)) / (2.0 * h);
                CHECK(std::abs(g[j] - fd) <= 1e-6 * (1.0 + std::abs(g[j])));
            }
        }
    }
}

TEST_CASE("divergence at the origin matches the Poisson-kernel integral") {
    // Sum_i d alpha_{p,i}/dx_i (0) = (2/pi^2) Int (1 - y.p)/|y-p|^4 dy, and
    // both sides equal 4 for every p (the integral identity behind the
    // constancy of the half-trace at the origin).
    QuadratureSpec spec;
    for (const Vec4& p : {Vec4(0, 0, 0, 0.5), Vec4(0.3, -0.2, 0.1, 0.4), Vec4(0, 0, 0, -0.85)}) {
        double div = 0.0;
        for (int i = 1; i <= 4; ++i) div += alpha_grad(p, i, Vec4::Zero())[i - 1];
        const auto integral = integrate_s3(
            [&](const Vec4& y) {
                const double d2 = (y - p).squaredNorm();
                return (1.0 - y.dot(p)) / (d2 * d2);
            },
            spec, align_minus_e4_to(p));
        CHECK(div == doctest::Approx(2.0 / (M_PI * M_PI) * integral.value).epsilon(1e-8));
        CHECK(div == doctest::Approx(4.0).epsilon(1e-12));
    }
}

TEST_CASE("h_oneforms: p = 0 expansion and quaternionic boundary trace") {
    const OneForms3 h0 = h_oneforms(Vec4::Zero(), Vec4(0.1, 0.2, 0.3, 0.4));
    CHECK(h0[0][0] == doctest::Approx(-0.2));
    CHECK(h0[0][1] == doctest::Approx(0.1));
    CHECK(h0[0][2] == doctest::Approx(0.4));
    CHECK(h0[0][3] == doctest::Approx(-0.3));

    // At |x| = 1 the 1-forms equal Im[(conj(x) - conj(p)) dx / |x-p|^4]:
    // the dx^j coefficient of component l is the (l+1)-th quaternion entry
    // of conj(x - p) * e_j / |x-p|^4.
    const Vec4 p(0.2, 0, 0, 0);
    SplitMix64 rng(23);
    for (int t = 0; t < 20; ++t) {
        const Vec4 x = random_unit4(rng);
        const OneForms3 h = h_oneforms(p, x);
        const Vec4 qc(x[0] - p[0], -(x[1] - p[1]), -(x[2] - p[2]), -(x[3] - p[3]));
        const double d2 = (x - p).squaredNorm();
        for (int j = 0; j < 4; ++j) {
            Vec4 ej = Vec4::Zero();
            ej[j] = 1.0;
            const Vec4 prod = qmul(qc, ej) / (d2 * d2);
            for (int l = 0; l < 3; ++l)
                CHECK(h[l][j] == doctest::Approx(prod[l + 1]).epsilon(1e-9));
        }
    }
}

TEST_CASE("h_oneforms components are harmonic") {
    SplitMix64 rng(29);
    for (int t = 0; t < 5; ++t) {
        const Vec4 p = 0.8 * random_ball4(rng);
        for (int probe = 0; probe < 10; ++probe) {
            const Vec4 x = 0.9 * random_ball4(rng);
            for (int l = 0; l < 3; ++l)
                for (int j = 0; j < 4; ++j) {
                    const auto f = [&](const Vec4& z) { return h_oneforms(p, z)[l][j]; };
                    const double scale = 1.0 + std::abs(f(x));
                    CHECK(std::abs(fd_laplacian(f, x, 1e-3)) <= 1e-4 * scale * 100.0);
                }
        }
    }
}

TEST_CASE("dh_asd fixtures") {
    // p = 0: the constant matrix 2 I
    const Mat3 d0 = dh_asd(Vec4::Zero(), Vec4(0.3, -0.2, 0.1, 0.5));
    CHECK((d0 - 2.0 * Mat3::Identity()).norm() < 1e-12);

    // row norms positive at the origin for sampled p
    SplitMix64 rng(31);
    for (int t = 0; t < 50; ++t) {
        const Vec4 p = 0.98 * random_ball4(rng);
        const Mat3 m = dh_asd(p, Vec4::Zero());
        for (int l = 0; l < 3; ++l) CHECK(m.row(l).norm() > 0.0);
    }
}

TEST_CASE("dh_asd equals the FD exterior derivative of h projected to ASD") {
    SplitMix64 rng(37);
    const double h = 1e-5;
    for (int t = 0; t < 15; ++t) {
        const Vec4 p = 0.85 * random_ball4(rng);
        const Vec4 x = 0.9 * random_ball4(rng);
        const Mat3 analytic = dh_asd(p, x);
        for (int l = 0; l < 3; ++l) {
            TwoForm w{};
            int idx = 0;
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b) {
                    Vec4 xa_p = x, xa_m = x, xb_p = x, xb_m = x;
                    xa_p[a] += h;
                    xa_m[a] -= h;
                    xb_p[b] += h;
                    xb_m[b] -= h;
                    const double dfb_da =
                        (h_oneforms(p, xa_p)[l][b] - h_oneforms(p, xa_m)[l][b]) / (2.0 * h);
                    const double dfa_db =
                        (h_oneforms(p, xb_p)[l][a] - h_oneforms(p, xb_m)[l][a]) / (2.0 * h);
                    w[idx++] = dfb_da - dfa_db;
                }
            const AsdCoeffs proj = asd_project(w);
            CHECK((proj.transpose() - analytic.row(l)).norm() <= 1e-6 * (1.0 + analytic.row(l).norm()));
        }
    }
}

TEST_CASE("alpha and dh entries are harmonic (FD Laplacian)") {
    SplitMix64 rng(41);
    for (int t = 0; t < 5; ++t) {
        const Vec4 p = 0.85 * random_ball4(rng);
        for (int probe = 0; probe < 10; ++probe) {
            Vec4 x = 0.9 * random_ball4(rng);
            if (x.norm() > 0.95) x *= 0.95 / x.norm();
            for (int i = 1; i <= 4; ++i) {
                const auto f = [&](const Vec4& z) { return alpha_closed(p, i, z); };
                const double scale = 1.0 + std::abs(f(x));
                CHECK(std::abs(fd_laplacian(f, x, 1e-3)) <= 1e-4 * scale * 100.0);
            }
            for (int l = 0; l < 3; ++l)
                for (int k = 0; k < 3; ++k) {
                    const auto f = [&](const Vec4& z) { return dh_asd(p, z)(l, k); };
                    const double scale = 1.0 + std::abs(f(x));
                    CHECK(std::abs(fd_laplacian(f, x, 1e-3)) <= 1e-4 * scale * 100.0);
                }
        }
    }
}

TEST_CASE("mean-value identity for the dh fields") {
    // Int_{B^4} (w_k-, (dh_{p,l})^-) = 2 Int (dh_{p,l})_k^- = pi^2 (dh_{p,l})_k^-(0)
    QuadratureSpec spec;
    spec.target_rel_tol = 1e-10;
    for (const Vec4& p : {Vec4(0, 0, 0, 0), Vec4(0.3, 0, 0, 0), Vec4(0, 0, 0, -0.7)}) {
        const Mat3 at0 = dh_asd(p, Vec4::Zero());
        const auto f = [&](const Vec4& x, double* out) {
            const Mat3 m = dh_asd(p, x);
            for (int l = 0; l < 3; ++l)
                for (int k = 0; k < 3; ++k) out[3 * l + k] = 2.0 * m(l, k);
        };
        const auto res = integrate_b4_multi(f, 9, spec, align_minus_e4_to(p));
        for (int l = 0; l < 3; ++l)
            for (int k = 0; k < 3; ++k) {
                const double expect = M_PI * M_PI * at0(l, k);
                CHECK(std::abs(res.value[3 * l + k] - expect) <= 1e-6 * (1.0 + std::abs(expect)));
            }
    }
}
