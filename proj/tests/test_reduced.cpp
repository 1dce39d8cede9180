#include "ymland/reduced.hpp"

#include "ymland/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace ymland;

namespace {

QuadratureSpec light_tier() {
    QuadratureSpec q;
    q.radial_order = 6;
    q.psi_order = 6;
    q.theta_order = 8;
    q.phi_points = 12;
    q.fixed_depth = 2;
    return q;
}

// The diag(5,2,1)-synthesized instance: base = 0, A = diag(5,2,1)/(2 pi^2),
// so M(p) = diag(5,2,1) for every p.
ReducedModel synthesized_521() {
    Mat3 a = Mat3::Zero();
    a.diagonal() = Vec3(5, 2, 1) / (2.0 * M_PI 	* M_PI);
    return ReducedModel(BoundarySpec({}, a), light_tier());
}

}  // namespace

TEST_CASE("reduced_energy closed-form fixture") {
    // A = I, base = 0, p = 0, R = I, eps = 0.01, lambda^2 = 0.005:
    // F_eps = 2(0.005)^2 12pi^2 - 4(0.01)(0.005) 6pi^2 = -6e-4 pi^2
    const ReducedModel model(BoundarySpec({}, Mat3::Identity()), light_tier());
    ParamPoint q;
    q.lambda = std::sqrt(0.005);
    const double e = model.energy(q, 0.01);
    CHECK(e == doctest::Approx(-6e-4 * M_PI * M_PI).epsilon(1e-8));

    // lambda = 0 gives 0
    q.lambda = 0.0;
    CHECK(model.energy(q, 0.01) == 0.0);

    // reducing the trace raises the energy at fixed lambda, p
    q.lambda = std::sqrt(0.005);
    ParamPoint flipped = q;
    flipped.R = Eigen::DiagonalMatrix<double, 3>(-1, -1, 1);
    CHECK(model.energy(flipped, 0.01) > model.energy(q, 0.01));
}

TEST_CASE("fiber_reduce closed forms and identities") {
    const double eps = 0.01;
    const double f = 12.0 * M_PI * M_PI;
    const double gamma = 6.0 * M_PI * M_PI;
    const auto fr = fiber_reduce(gamma, eps, f);
    REQUIRE(fr.has_value());
    CHECK(fr->lambda_star * fr->lambda_star == doctest::Approx(0.005).epsilon(1e-14));
    CHECK(fr->value == doctest::Approx(-2e-4 * 3.0 * M_PI * M_PI).epsilon(1e-14));

    CHECK_FALSE(fiber_reduce(0.0, eps, f).has_value());
    CHECK_FALSE(fiber_reduce(-2.0, eps, f).has_value());

    // value equals reduced_energy at (F, Gamma, lambda*) to 1e-12
    CHECK(std::abs(reduced_energy(fr->lambda_star, f, gamma, eps) - fr->value) <=
          1e-12 * std::abs(fr->value));
}

TEST_CASE("lambda derivative closed form matches finite differences") {
    const double f = 150.0, gamma = 4.2, eps = 0.01;
    for (double lambda : {0.01, 0.05, 0.2}) {
        const double closed = 8.0 * lambda * lambda * lambda * f - 8.0 * eps * lambda * gamma;
        const double h = 1e-6;
        const double fd =
            (reduced_energy(lambda + h, f, gamma, eps) - reduced_energy(lambda - h, f, gamma, eps)) /
            (2.0 * h);
        CHECK(std::abs(fd - closed) <= 1e-6 * (1.0 + std::abs(closed)));
    }
}

TEST_CASE("epsilon scaling of the fiber optimum") {
    const double f = 90.0, gamma = 3.0;
    const auto a = fiber_reduce(gamma, 1e-2, f);
    const auto b = fiber_reduce(gamma, 1e-3, f);
    CHECK(a->lambda_star / b->lambda_star == doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));
    CHECK(a->value / b->value == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("suggest_window recipe") {
    const ReducedModel model = synthesized_521();
    const SearchWindow w = suggest_window(model, 1.0, 0.5, 3);
    CHECK(w.feasible);
    CHECK(w.D1 > 0.0);
    CHECK(w.D1 < w.D2);
    CHECK(w.lambda0 == doctest::Approx(0.99 * 0.25));
    // Gamma1+ is p-independent here, so C4 = 8 exactly
    CHECK(w.C4 == doctest::Approx(8.0).epsilon(1e-6));
    CHECK(w.C5 == doctest::Approx(12.0 * M_PI * M_PI).epsilon(1e-3));

    // D1 scales like sqrt(C0)
    const SearchWindow w100 = suggest_window(model, 100.0, 0.5, 3);
    CHECK(w100.D1 / w.D1 == doctest::Approx(10.0).epsilon(1e-9));

    // infeasible when C0 is large enough that D1 >= D2
    const SearchWindow bad = suggest_window(model, 1e7, 0.5, 3);
    CHECK_FALSE(bad.feasible);

    CHECK_THROWS_AS(suggest_window(model, -1.0, 0.5, 3), std::invalid_argument);
}

TEST_CASE("find_critical minimize on the synthesized diag(5,2,1) instance") {
    const ReducedModel model = synthesized_521();
    const double eps = 0.01;
    SearchWindow w = suggest_window(model, 1.0, 0.5, 3);
    FindOptions opts;
    opts.multistart = 4;

    const auto crits = find_critical(model, w, eps, SearchStrategy::Minimize, opts);
    REQUIRE(!crits.empty());
    const ReducedCritical& best = crits.front();

    // interior minimizer with the FD-gradient gate
    CHECK(best.grad_norm <= 1e-8 * eps * eps);
    CHECK(best.q.p.norm() < 1.0 - w.d0);
    const double l2 = best.q.lambda * best.q.lambda;
    CHECK(l2 > w.D1 * eps);
    CHECK(l2 < w.D2 * eps);
    CHECK(best.classification == "min");

    // the minimizer sits at p = 0 (radial landscape) with Gamma = 8
    CHECK(best.q.p.norm() <= 1e-4);
    CHECK(best.gamma == doctest::Approx(8.0).epsilon(1e-6));

    // fiber identities at the located point
    const double f = model.F(best.q.p);
    CHECK(std::abs(best.value - (-2.0 * eps * eps * best.gamma * best.gamma / f)) <=
          1e-8 * std::abs(best.value));
    CHECK(std::abs(best.lambda_sq_residual) <= 1e-10);
}

TEST_CASE("find_critical all-fibers finds the minimum and a saddle") {
    const ReducedModel model = synthesized_521();
    const double eps = 0.01;
    SearchWindow w = suggest_window(model, 1.0, 0.5, 3);
    FindOptions opts;
    opts.grid_per_axis = 3;

    const auto crits = find_critical(model, w, eps, SearchStrategy::AllFibers, opts);
    REQUIRE(crits.size() >= 2);
    bool found_min = false, found_saddle = false;
    for (const auto& rc : crits) {
        if (rc.classification == "min" && std::abs(rc.gamma - 8.0) < 1e-4) found_min = true;
        if (rc.classification == "saddle" && std::abs(rc.gamma - 2.0) < 1e-4) {
            found_saddle = true;
            CHECK(rc.saddle_index > 0);
        }
        CHECK(rc.q.p.norm() < 1.0 - w.d0);
    }
    CHECK(found_min);
    CHECK(found_saddle);
}

TEST_CASE("all-fibers flags an SO(3)-degenerate spectrum") {
    const ReducedModel model(BoundarySpec({}, Mat3::Identity()), light_tier());
    const double eps = 0.01;
    SearchWindow w = suggest_window(model, 1.0, 0.5, 3);
    FindOptions opts;
    opts.grid_per_axis = 3;
    const auto crits = find_critical(model, w, eps, SearchStrategy::AllFibers, opts);
    REQUIRE(!crits.empty());
    for (const auto& rc : crits) CHECK(rc.classification == "so3-degenerate");
}

TEST_CASE("flow invariance margins with the recipe window") {
    const ReducedModel model = synthesized_521();
    const double eps = 0.01;
    const SearchWindow w = suggest_window(model, 0.05, 0.5, 3);
    const auto rep = check_flow_invariance(model, w, eps, 80, 2024);
    CHECK(rep.all_positive);
    // the D2 recipe pushes the high face entirely out of the sublevel set
    CHECK(rep.lambda_hi.vacuous);
    CHECK(rep.p_face.n_inside + rep.lambda_lo.n_inside + rep.lambda_hi.n_inside > 0);
}

TEST_CASE("vacuous faces when C0 exceeds the global energy scale") {
    const ReducedModel model = synthesized_521();
    const double eps = 0.01;
    SearchWindow w = suggest_window(model, 0.05, 0.5, 3);
    w.C0 = 100.0;  // |F_eps| never reaches 100 eps^2
    const auto rep = check_flow_invariance(model, w, eps, 40, 7);
    CHECK(rep.p_face.vacuous);
    CHECK(rep.lambda_lo.vacuous);
    CHECK(rep.lambda_hi.vacuous);
    CHECK(rep.all_positive);  // +inf margins
}

TEST_CASE("stilde set: inclusion at leading order") {
    const ReducedModel model = synthesized_521();
    const double eps = 0.01;
    const auto rep = stilde_set(model, Vec4::Zero(), 1.0, eps, 100, 31);
    CHECK(rep.lambda0 == doctest::Approx(std::sqrt(1.0 * eps / rep.f_p0)).epsilon(1e-12));
    CHECK(rep.category.applicable);
    CHECK(rep.category.cat_lower_bound == 2);
    CHECK(rep.n_checked >= 100);
    CHECK(rep.n_violations == 0);
    CHECK(rep.max_energy <= rep.bound + 1e-12 * std::abs(rep.bound));

    // eta above the top critical value: empty set
    CHECK_THROWS_AS(stilde_set(model, Vec4::Zero(), 9.0, eps, 10, 31), std::domain_error);
    CHECK_THROWS_AS(stilde_set(model, Vec4::Zero(), -1.0, eps, 10, 31), std::invalid_argument);
}
