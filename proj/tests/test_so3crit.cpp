#include "ymland/so3crit.hpp"

#include "ymland/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace ymland;

namespace {

Mat3 diag(double a, double b, double c) {
    Mat3 m = Mat3::Zero();
    m.diagonal() = Vec3(a, b, c);
    return m;
}

void check_point_invariants(const Mat3& m, const CriticalRotation& cp) {
    // R0 in SO(3)
    CHECK((cp.R0.transpose() * cp.R0 - Mat3::Identity()).norm() < 1e-8);
    CHECK(cp.R0.determinant() == doctest::Approx(1.0).epsilon(1e-8));
    // R0 M symmetric (stationarity)
    const Mat3 b = cp.R0 * m;
    CHECK((b - b.transpose()).norm() <= 1e-9 * std::max(1.0, m.norm()));
    // B^2 = M^t M, det B = det M
    CHECK((cp.B * cp.B - m.transpose() * m).norm() <= 1e-8 * (1.0 + m.squaredNorm()));
    CHECK(cp.B.determinant() == doctest::Approx(m.determinant()).epsilon(1e-8));
    // value = Tr(R0 M)
    CHECK(cp.value == doctest::Approx(b.trace()).epsilon(1e-10));
}

std::vector<double> values_of(const std::vector<CriticalRotation>& cps) {
    std::vector<double> v;
    for (const auto& cp : cps) v.push_back(cp.value);
    return v;
}

}  // namespace

TEST_CASE("enumerate_critical: diag(5,2,1)") {
    const Mat3 m = diag(5, 2, 1);
    const auto cps = enumerate_critical(m);
    REQUIRE(cps.size() == 4);
    const std::vector<double> expect{8, 2, -4, -6};
    const std::vector<int> indices{3, 2, 1, 0};
    for (int i = 0; i < 4; ++i) {
        CHECK(cps[i].value == doctest::Approx(expect[i]).epsilon(1e-12));
        CHECK(cps[i].morse_index == indices[i]);
        CHECK_FALSE(cps[i].degenerate);
        check_point_invariants(m, cps[i]);
    }
}

TEST_CASE("enumerate_critical: diag(3,2,-1), negative determinant") {
    const Mat3 m = diag(3, 2, -1);
    const auto cps = enumerate_critical(m);
    REQUIRE(cps.size() == 4);
    const std::vector<double> expect{4, 2, 0, -6};
    const std::vector<int> indices{3, 2, 1, 0};
    for (int i = 0; i < 4; ++i) {
        CHECK(cps[i].value == doctest::Approx(expect[i]).epsilon(1e-12));
        CHECK(cps[i].morse_index == indices[i]);
        CHECK_FALSE(cps[i].degenerate);
        check_point_invariants(m, cps[i]);
    }
}

TEST_CASE("enumerate_critical: identity matrix degeneracies") {
    const auto cps = enumerate_critical(Mat3::Identity());
    REQUIRE(cps.size() == 4);
    CHECK(cps[0].value == doctest::Approx(3.0));
    CHECK(cps[0].morse_index == 3);
    CHECK_FALSE(cps[0].degenerate);
    for (int i = 1; i < 4; ++i) {
        CHECK(cps[i].value == doctest::Approx(-1.0));
        CHECK(cps[i].degenerate);
        CHECK(cps[i].morse_index == -1);  // undefined at degenerate points
    }
}

TEST_CASE("enumerate_critical: singular matrix route") {
    const Mat3 m = diag(5, 2, 0);
    const auto cps = enumerate_critical(m);
    REQUIRE(cps.size() == 4);
    const std::vector<double> expect{7, 3, -3, -7};
    const std::vector<int> indices{3, 2, 1, 0};
    for (int i = 0; i < 4; ++i) {
        CHECK(cps[i].value == doctest::Approx(expect[i]).epsilon(1e-10));
        CHECK(cps[i].morse_index == indices[i]);
        check_point_invariants(m, cps[i]);
    }

    // rank-1: mu2 = 0 degenerates cases (a) and (d) as well
    const auto rank1 = enumerate_critical(diag(2, 0, 0));
    for (const auto& cp : rank1) CHECK(cp.degenerate);
}

TEST_CASE("hessian analytic diagonal and FD agreement") {
    const Mat3 m = diag(3, 2, 1);
    const auto cps = enumerate_critical(m);
    CHECK(cps[0].hessian_diag.isApprox(Vec3(-3, -4, -5), 1e-12));
    for (const auto& cp : cps) CHECK(hessian_check(m, cp) <= 1e-5);

    SplitMix64 rng(71);
    for (int t = 0; t < 10; ++t) {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r(i / 3, i % 3) = 4.0 * rng.next_double() - 2.0;
        if (std::abs(r.determinant()) < 0.1) continue;
        for (const auto& cp : enumerate_critical(r))
            if (!cp.degenerate) CHECK(hessian_check(r, cp) <= 1e-5);
    }
}

TEST_CASE("morse index multiset is {0,1,2,3} for non-degenerate M") {
    SplitMix64 rng(73);
    int tested = 0;
    while (tested < 50) {
        Mat3 m;
        for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = 4.0 * rng.next_double() - 2.0;
        if (std::abs(m.determinant()) < 0.1) continue;
        const auto cps = enumerate_critical(m);
        bool anydeg = false;
        std::multiset<int> indices;
        for (const auto& cp : cps) {
            anydeg |= cp.degenerate;
            indices.insert(cp.morse_index);
        }
        if (anydeg) continue;
        CHECK(indices == std::multiset<int>({0, 1, 2, 3}));
        ++tested;
    }
}

TEST_CASE("scale covariance under positive scaling") {
    const Mat3 m = (Mat3() << 1.2, -0.3, 0.4, 0.7, 0.1, -1.1, 0.2, 0.9, 0.5).finished();
    const double c = 3.7;
    const auto base = enumerate_critical(m);
    const auto scaled = enumerate_critical(c * m);
    REQUIRE(base.size() == scaled.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(scaled[i].value == doctest::Approx(c * base[i].value).epsilon(1e-10));
        CHECK(so3_distance(scaled[i].R0, base[i].R0) < 1e-8);
    }
}

TEST_CASE("descent oracle: uniqueness on diag(5,2,1)") {
    const Mat3 m = diag(5, 2, 1);
    const auto res = descent_oracle(m, 200, 12345);
    CHECK(res.n_failed == 0);
    REQUIRE(res.clusters.size() == 4);
    const std::vector<double> expect{8, 2, -4, -6};
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(res.clusters[i].value - expect[i]) <= 1e-8);
        CHECK(res.clusters[i].residual <= 1e-9 * m.norm());
    }
}

TEST_CASE("descent oracle: degenerate identity matrix values") {
    const auto res = descent_oracle(Mat3::Identity(), 200, 999);
    for (const auto& c : res.clusters) {
        const bool near3 = std::abs(c.value - 3.0) <= 1e-6;
        const bool nearm1 = std::abs(c.value + 1.0) <= 1e-6;
        CHECK((near3 || nearm1));
    }
}

TEST_CASE("descent oracle completeness over random fixtures") {
    SplitMix64 rng(77);
    int tested = 0;
    while (tested < 50) {
        Mat3 m;
        for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = 4.0 * rng.next_double() - 2.0;
        if (std::abs(m.determinant()) < 0.1) continue;
        ++tested;
        const auto enumerated = values_of(enumerate_critical(m));
        const auto res = descent_oracle(m, 40, 1000 + tested);
        for (const auto& c : res.clusters) {
            double best = 1e9;
            for (double v : enumerated) best = std::min(best, std::abs(v - c.value));
            CHECK(best <= 1e-6);
        }
    }
}

TEST_CASE("category report fixtures") {
    // det > 0, sqrt(mu1) = 5 > 3: case 1, eta = 1, bound 2
    auto rep = category_report(diag(5, 2, 1));
    CHECK(rep.applicable);
    CHECK(rep.case_tag == "case-1");
    CHECK(rep.eta == doctest::Approx(1.0));
    CHECK(rep.cat_lower_bound == 2);
    REQUIRE(rep.positive_values_above_eta.size() == 2);
    CHECK(rep.positive_values_above_eta[0] == doctest::Approx(8.0));
    CHECK(rep.positive_values_above_eta[1] == doctest::Approx(2.0));

    // det < 0 with sqrt(mu1) = 2.5 < 3: three positive values, bound 3
    rep = category_report(diag(2.5, 2, -1));
    CHECK(rep.applicable);
    CHECK(rep.case_tag == "case-2-extra");
    CHECK(rep.eta == doctest::Approx(0.25));
    CHECK(rep.cat_lower_bound == 3);
    CHECK(rep.positive_values_above_eta.size() == 3);

    // boundary case 3 < 3 fails strictly: bound 2 only
    rep = category_report(diag(3, 2, -1));
    CHECK(rep.applicable);
    CHECK(rep.case_tag == "case-2");
    CHECK(rep.eta == doctest::Approx(1.0));
    CHECK(rep.cat_lower_bound == 2);

    // degenerate spectrum: inapplicable
    rep = category_report(Mat3::Identity());
    CHECK_FALSE(rep.applicable);

    // eta override is honored
    rep = category_report(diag(5, 2, 1), 3.5);
    CHECK(rep.eta == doctest::Approx(3.5));
    CHECK(rep.positive_values_above_eta.size() == 1);
}
