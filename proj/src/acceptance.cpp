#include "ymland/acceptance.hpp"

#include "ymland/boundary.hpp"
#include "ymland/harmonic.hpp"
#include "ymland/landscape.hpp"
#include "ymland/reduced.hpp"
#include "ymland/rng.hpp"
#include "ymland/so3crit.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

namespace ymland {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(const Clock::time_point& t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel_dev(double got, double expect) { return std::abs(got - expect) / (1.0 + std::abs(expect)); }

Mat3 diag3(double a, double b, double c) {
    Mat3 m = Mat3::Zero();
    m.diagonal() = Vec3(a, b, c);
    return m;
}

std::array<PolyOneForm, 3> sample_base() {
    std::array<PolyOneForm, 3> base;
    base[0].comp[1] = Poly4::variable(1);
    base[0].comp[3] = Poly4::variable(3) * (-1.0);
    base[1].comp[0] = Poly4::monomial({1, 1, 0, 0}, 1.0);
    base[2].comp[2] = Poly4::monomial({2, 0, 0, 0}, 1.0) - Poly4::monomial({0, 0, 0, 2}, 1.0);
    return base;
}

QuadratureSpec model_tier(const QuadratureSpec& base, int depth) {
    QuadratureSpec q = base;
    q.radial_order = 6;
    q.psi_order = 6;
    q.theta_order = 8;
    q.phi_points = 12;
    q.fixed_depth = depth;
    return q;
}

// Cancellation quality of the 9-point Laplacian stencil: |sum of axis second
// differences| over the sum of their magnitudes. Harmonic fields score near
// machine epsilon; any non-harmonic field scores O(1).
double scaled_fd_laplacian(const std::function<double(const Vec4&)>& f, const Vec4& x, double h) {
    double num = 0.0, den = 1e-300;
    const double f0 = f(x);
    for (int j = 0; j < 4; ++j) {
        Vec4 xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const double d2 = f(xp) - 2.0 * f0 + f(xm);
        num += d2;
        den += std::abs(d2);
    }
    return std::abs(num) / den;
}

struct Suite {
    VerifyReport& rep;

    void run(const std::string& name, double threshold, const std::function<void(CheckResult&)>& body) {
        CheckResult c;
        c.name = name;
        c.threshold = threshold;
        const auto t0 = Clock::now();
        try {
            body(c);
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        c.seconds = seconds_since(t0);
        rep.checks.push_back(c);
    }
};

}  // namespace

VerifyReport run_verify(const VerifyOptions& opts) {
    VerifyReport rep;
    Suite suite{rep};
    const auto t_start = Clock::now();

    // 1. Poisson-oracle agreement on a 5x5 (p, x) grid, |p| <= 0.9, |x| <= 0.8.
    suite.run("poisson-oracle-agreement", 1e-6, [&](CheckResult& c) {
        const std::array<Vec4, 5> pdirs{Vec4(0, 0, 0, -1), Vec4(1, 0, 0, 0), Vec4(0.5, 0.5, 0.5, 0.5),
                                        Vec4(0, -1, 0, 0), Vec4(0.5, 0, -0.5, -0.70710678)};
        const std::array<Vec4, 5> xdirs{Vec4(0, 0, 0, 1), Vec4(0, 1, 0, 0), Vec4(-0.5, 0.5, -0.5, 0.5),
                                        Vec4(1, 0, 0, 0), Vec4(0, 0.6, 0, 0.8)};
        const std::array<double, 5> pr{0.0, 0.225, 0.45, 0.675, 0.9};
        const std::array<double, 5> xr{0.0, 0.2, 0.4, 0.6, 0.8};
        double worst = 0.0;
        for (int k = 0; k < 5; ++k)
            for (int j = 0; j < 5; ++j) {
                const Vec4 p = pr[k] * pdirs[k].normalized();
                const Vec4 x = xr[j] * xdirs[j].normalized();
                const int i = (k + j) % 4 + 1;
                const double closed = alpha_closed(p, i, x);
                const double poisson = alpha_poisson(p, i, x, opts.quad).value;
                worst = std::max(worst, rel_dev(poisson, closed));
            }
        c.measured = worst;
        c.pass = worst <= c.threshold;
        c.detail = "max |closed - poisson|/(1+|closed|) over 25 pairs; 60 s budget applies";
    });
    if (!rep.checks.empty() && rep.checks.back().seconds > 60.0) {
        rep.checks.back().pass = false;
        rep.checks.back().detail += "; exceeded the 60 s budget";
    }

    // 2. Harmonicity of the four alpha fields and nine (dh)^- entries.
    suite.run("harmonicity-fd-laplacian", 1e-4, [&](CheckResult& c) {
        SplitMix64 rng(opts.seed ^ 0x11);
        double worst = 0.0;
        for (int ps = 0; ps < 5; ++ps) {
            const Vec4 p = 0.8 * random_ball4(rng);
            for (int xs = 0; xs < 50; ++xs) {
                const Vec4 x = random_ball4(rng) * 0.95;  // distance >= 0.05 from the boundary
                for (int i = 1; i <= 4; ++i)
                    worst = std::max(
                        worst, scaled_fd_laplacian([&](const Vec4& z) { return alpha_closed(p, i, z); },
                                                   x, 1e-3));
                for (int l = 0; l < 3; ++l)
                    for (int k = 0; k < 3; ++k)
                        worst = std::max(
                            worst, scaled_fd_laplacian([&](const Vec4& z) { return dh_asd(p, z)(l, k); },
                                                       x, 1e-3));
            }
        }
        c.measured = worst;
        c.pass = worst <= c.threshold;
        c.detail = "max cancellation residual of the 9-point Laplacian stencil, step 1e-3";
    });

    // 3. Mean-value identity Int (w_k-, (dh_{p,l})^-) = pi^2 (dh_{p,l})_k^-(0).
    suite.run("mean-value-identity", 1e-6, [&](CheckResult& c) {
        double worst = 0.0;
        for (const Vec4& p : {Vec4(0, 0, 0, 0), Vec4(0.3, 0, 0, 0), Vec4(0, 0, 0, -0.7)}) {
            const Mat3 at0 = dh_asd(p, Vec4::Zero());
            const auto f = [&](const Vec4& x, double* out) {
                const Mat3 m = dh_asd(p, x);
                for (int l = 0; l < 3; ++l)
                    for (int k = 0; k < 3; ++k) out[3 * l + k] = 2.0 * m(l, k);
            };
            const auto res = integrate_b4_multi(f, 9, opts.quad, align_minus_e4_to(p));
            for (int l = 0; l < 3; ++l)
                for (int k = 0; k < 3; ++k)
                    worst = std::max(worst, rel_dev(res.value[3 * l + k], M_PI * M_PI * at0(l, k)));
        }
        c.measured = worst;
        c.pass = worst <= c.threshold;
        c.detail = "9 entries at p in {0, 0.3 e1, -0.7 e4}";
    });

    // 4. F(0) = 12 pi^2.
    suite.run("F-at-centre", 1e-8, [&](CheckResult& c) {
        const double f0 = F_value(Vec4::Zero(), opts.quad).value;
        c.measured = std::abs(f0 - 12.0 * M_PI * M_PI) / (12.0 * M_PI * M_PI);
        c.pass = c.measured <= c.threshold;
        c.detail = "relative deviation from 12 pi^2";
    });

    // 5. Boundary blow-up exponent of F.
    suite.run("F-boundary-exponent", 0.15, [&](CheckResult& c) {
        QuadratureSpec q = opts.quad;
        q.max_depth = std::max(q.max_depth, 12);
        const auto fit = asymptotic_probe(ProbeQuantity::F, Vec4(0, 0, 0, -1), {0.2, 0.1, 0.05, 0.025},
                                          BoundarySpec({}, Mat3::Identity()), q);
        const double slope_dev = std::abs(fit.slope + 4.0);
        const double s1 = fit.value[2] * std::pow(fit.d[2], 4);
        const double s2 = fit.value[3] * std::pow(fit.d[3], 4);
        const double tail_change = std::abs(s1 - s2) / s2;
        c.measured = slope_dev;
        c.pass = slope_dev <= 0.15 && tail_change < 0.10;
        std::ostringstream d;
        d << "slope " << fit.slope << " (want -4 +/- 0.15); F d^4 tail change " << tail_change
          << " (want < 0.10)";
        c.detail = d.str();
    });

    // 6. Interaction entries stay bounded while F blows up.
    suite.run("M-bounded-F-blows-up", 2.0, [&](CheckResult& c) {
        QuadratureSpec q = opts.quad;
        q.max_depth = std::max(q.max_depth, 12);
        const BoundarySpec flat({}, Mat3::Identity());
        double mmin = 1e300, mmax = 0.0, f_first = 0.0, f_last = 0.0;
        for (double d : {0.2, 0.1, 0.05, 0.025}) {
            const Vec4 p(0, 0, 0, -(1.0 - d));
            const double entry = M_volume(flat, p, q).M.cwiseAbs().maxCoeff();
            mmin = std::min(mmin, entry);
            mmax = std::max(mmax, entry);
            const double f = F_value(p, q).value;
            if (d == 0.2) f_first = f;
            if (d == 0.025) f_last = f;
        }
        const double variation = mmax / mmin;
        const double f_growth = f_last / f_first;
        c.measured = variation;
        c.pass = variation < 2.0 && f_growth > 100.0;
        std::ostringstream d;
        d << "max|m_ij| variation x" << variation << "; F growth x" << f_growth << " (want > 100)";
        c.detail = d.str();
    });

    // 7. Exact enumeration tables on the three fixtures.
    suite.run("so3-enumeration-tables", 1e-9, [&](CheckResult& c) {
        double worst_residual = 0.0;
        bool tables_ok = true;
        const auto check_fixture = [&](const Mat3& m, const std::vector<double>& values,
                                       const std::vector<int>& indices) {
            const auto cps = enumerate_critical(m);
            if (cps.size() != 4) {
                tables_ok = false;
                return;
            }
            for (int i = 0; i < 4; ++i) {
                if (std::abs(cps[i].value - values[i]) > 1e-12 * (1.0 + std::abs(values[i])))
                    tables_ok = false;
                if (indices[i] >= 0 && cps[i].morse_index != indices[i]) tables_ok = false;
                const Mat3 b = cps[i].R0 * m;
                worst_residual =
                    std::max(worst_residual, (b - b.transpose()).norm() / std::max(1.0, m.norm()));
            }
        };
        check_fixture(diag3(5, 2, 1), {8, 2, -4, -6}, {3, 2, 1, 0});
        check_fixture(diag3(3, 2, -1), {4, 2, 0, -6}, {3, 2, 1, 0});
        check_fixture(Mat3::Identity(), {3, -1, -1, -1}, {3, -1, -1, -1});
        const auto id_cps = enumerate_critical(Mat3::Identity());
        for (int i = 1; i < 4; ++i)
            if (!id_cps[i].degenerate) tables_ok = false;
        if (id_cps[0].degenerate || id_cps[0].morse_index != 3) tables_ok = false;
        c.measured = worst_residual;
        c.pass = tables_ok && worst_residual <= c.threshold;
        c.detail = tables_ok ? "value/index tables exact; RM-symmetry residual shown"
                             : "table mismatch (see unit tests)";
    });

    // 8. Descent-oracle uniqueness and completeness.
    suite.run("so3-descent-uniqueness", 1e-6, [&](CheckResult& c) {
        const auto res = descent_oracle(diag3(5, 2, 1), 200, opts.seed ^ 0x21);
        bool ok = res.clusters.size() == 4 && res.n_failed == 0;
        const std::vector<double> expect{8, 2, -4, -6};
        for (std::size_t i = 0; ok && i < 4; ++i)
            if (std::abs(res.clusters[i].value - expect[i]) > 1e-8) ok = false;

        SplitMix64 rng(opts.seed ^ 0x22);
        double worst = 0.0;
        int tested = 0;
        while (tested < 50) {
            Mat3 m;
            for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = 4.0 * rng.next_double() - 2.0;
            if (std::abs(m.determinant()) < 0.1) continue;
            ++tested;
            std::vector<double> enumerated;
            for (const auto& cp : enumerate_critical(m)) enumerated.push_back(cp.value);
            const auto r = descent_oracle(m, 40, opts.seed ^ (0x1000 + tested));
            for (const auto& cl : r.clusters) {
                double best = 1e300;
                for (double v : enumerated) best = std::min(best, std::abs(v - cl.value));
                worst = std::max(worst, best);
            }
        }
        c.measured = worst;
        c.pass = ok && worst <= c.threshold;
        std::ostringstream d;
        d << "fixture clusters " << res.clusters.size()
          << "/4 exact to 1e-8; max stationary-value distance over 50 random M shown";
        c.detail = d.str();
    });

    // 9. Hessian FD agreement and the Morse-index partition.
    suite.run("so3-hessian-and-indices", 1e-5, [&](CheckResult& c) {
        double worst = 0.0;
        bool partition_ok = true;
        for (const Mat3& m : {diag3(5, 2, 1), diag3(3, 2, -1)}) {
            std::multiset<int> indices;
            for (const auto& cp : enumerate_critical(m)) {
                worst = std::max(worst, hessian_check(m, cp));
                indices.insert(cp.morse_index);
            }
            if (indices != std::multiset<int>({0, 1, 2, 3})) partition_ok = false;
        }
        worst = std::max(worst, hessian_check(Mat3::Identity(), enumerate_critical(Mat3::Identity())[0]));
        c.measured = worst;
        c.pass = worst <= c.threshold && partition_ok;
        c.detail = "max |FD - analytic| over fixture critical points; index multiset {0,1,2,3}";
    });

    // 10. Synthesized-family closed form and the two quadrature routes.
    suite.run("M-closed-form-and-routes", 1e-5, [&](CheckResult& c) {
        SplitMix64 rng(opts.seed ^ 0x31);
        double worst_closed = 0.0, worst_routes = 0.0;
        for (int t = 0; t < 10; ++t) {
            Mat3 a;
            for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = 2.0 * rng.next_double() - 1.0;
            const Vec4 p = 0.7 * random_ball4(rng);
            const BoundarySpec s({}, a);
            const Mat3 mv = M_volume(s, p, opts.quad).M;
            const Mat3 mb = M_boundary(s, p, opts.quad).M;
            const Mat3 closed = M_PI * M_PI * h_matrix(p).matrix() * a;
            worst_closed = std::max(worst_closed, (mv - closed).norm() / (1.0 + closed.norm()));
            worst_routes = std::max(worst_routes, (mv - mb).norm() / (1.0 + mv.norm()));
        }
        c.measured = std::max(worst_closed, worst_routes);
        c.pass = worst_closed <= 1e-6 && worst_routes <= 1e-5;
        std::ostringstream d;
        d << "closed-form dev " << worst_closed << " (tol 1e-6); route dev " << worst_routes
          << " (tol 1e-5), 10 random (A, p)";
        c.detail = d.str();
    });

    // 11. Synthesis round trip at three base points.
    suite.run("synthesis-round-trip", 1e-5, [&](CheckResult& c) {
        SplitMix64 rng(opts.seed ^ 0x41);
        const auto base = sample_base();
        double worst = 0.0;
        for (const Vec4& p0 : {Vec4(0, 0, 0, 0), Vec4(0.3, 0.1, 0, 0), Vec4(0, 0, 0, -0.5)}) {
            for (int t = 0; t < 5; ++t) {
                Mat3 target;
                for (int i = 0; i < 9; ++i) target(i / 3, i % 3) = 4.0 * rng.next_double() - 2.0;
                const BoundarySpec s = synthesize(target, p0, base, opts.quad);
                const Mat3 back = M_volume(s, p0, opts.quad).M;
                worst = std::max(worst, (back - target).norm() / (1.0 + target.norm()));
            }
        }
        c.measured = worst;
        c.pass = worst <= c.threshold;
        c.detail = "5 random targets at each of 3 base points, nonzero harmonic base";
    });

    // 12. Spectrum separation with (6,4,2) Richardson slopes.
    suite.run("perturbation-spectrum-slopes", 0.10, [&](CheckResult& c) {
        SplitMix64 rng(opts.seed ^ 0x51);
        Mat3 a;
        for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = rng.next_double() - 0.5;
        const BoundarySpec spec({}, a);
        const Vec4 p0(0.2, 0, -0.1, 0.1);
        const Vec3 mu0 = M_decomposed(spec, p0, opts.quad).spectrum.mu;
        const auto slopes = [&](double mu) {
            const BoundarySpec pert = perturb_nondegenerate(spec, p0, mu, opts.quad);
            return Vec3((M_decomposed(pert, p0, opts.quad).spectrum.mu - mu0) / mu);
        };
        const Vec3 rich = 2.0 * slopes(5e-3) - slopes(1e-2);
        const Vec3 expect(6, 4, 2);
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(rich[i] - expect[i]) / expect[i]);

        const BoundarySpec pert = perturb_nondegenerate(spec, p0, 1e-2, opts.quad);
        const Vec3 mus = M_decomposed(pert, p0, opts.quad).spectrum.mu;
        const bool separated = mus[0] > mus[1] && mus[1] > mus[2] && mus[2] > 0.0;
        c.measured = worst;
        c.pass = worst <= c.threshold && separated;
        std::ostringstream d;
        d << "Richardson slopes (" << rich[0] << ", " << rich[1] << ", " << rich[2]
          << ") vs (6,4,2); strictly separated: " << (separated ? "yes" : "no");
        c.detail = d.str();
    });

    // 13. Reduced-model minimizer for the diag(5,2,1)-synthesized instance.
    suite.run("reduced-minimizer", 1e-8, [&](CheckResult& c) {
        const double eps = 0.01;
        Mat3 a = Mat3::Zero();
        a.diagonal() = Vec3(5, 2, 1) / (2.0 * M_PI * M_PI);
        const ReducedModel model(BoundarySpec({}, a), model_tier(opts.quad, 2));
        const SearchWindow w = suggest_window(model, 1.0, 0.5, 3, opts.seed ^ 0x61);
        FindOptions fo;
        fo.multistart = 6;
        fo.seed = opts.seed ^ 0x62;
        const auto crits = find_critical(model, w, eps, SearchStrategy::Minimize, fo);
        const ReducedCritical& best = crits.front();

        const double l2 = best.q.lambda * best.q.lambda;
        const bool interior = best.q.p.norm() < 1.0 - w.d0 && l2 > w.D1 * eps && l2 < w.D2 * eps;
        const double f = model.F(best.q.p);
        const double fiber_dev =
            std::abs(best.value + 2.0 * eps * eps * best.gamma * best.gamma / f) / std::abs(best.value);
        const bool grads_ok = best.grad_norm <= 1e-8 * eps * eps;
        const bool lambda_ok = std::abs(best.lambda_sq_residual) <= 1e-10;

        c.measured = best.grad_norm / (eps * eps);
        c.pass = grads_ok && interior && fiber_dev <= 1e-8 && lambda_ok && best.classification == "min";
        std::ostringstream d;
        d << "|grad|/eps^2 = " << best.grad_norm / (eps * eps) << " (tol 1e-8); interior " << interior
          << "; fiber dev " << fiber_dev << " (tol 1e-8); lambda^2 residual " << best.lambda_sq_residual
          << " (tol 1e-10); class " << best.classification;
        c.detail = d.str();
    });

    // 14. Flow-invariance margins on the window faces.
    suite.run("flow-invariance-margins", 0.0, [&](CheckResult& c) {
        const double eps = 0.01;
        Mat3 a = Mat3::Zero();
        a.diagonal() = Vec3(5, 2, 1) / (2.0 * M_PI * M_PI);
        const ReducedModel model(BoundarySpec({}, a), model_tier(opts.quad, 1));
        const SearchWindow w = suggest_window(model, 0.05, 0.5, 3, opts.seed ^ 0x71);
        const auto repm = check_flow_invariance(model, w, eps, 2800, opts.seed ^ 0x72);
        const int inside = repm.p_face.n_inside + repm.lambda_lo.n_inside + repm.lambda_hi.n_inside;
        double min_margin = 1e300;
        for (const FaceReport* f : {&repm.p_face, &repm.lambda_lo, &repm.lambda_hi})
            if (!f->vacuous) min_margin = std::min(min_margin, f->margin);
        c.measured = min_margin;
        c.pass = repm.all_positive && inside >= 200;
        std::ostringstream d;
        d << "min margin over non-vacuous faces " << min_margin << "; sublevel samples " << inside
          << " (want >= 200); inside per face: p " << repm.p_face.n_inside << ", lo "
          << repm.lambda_lo.n_inside << ", hi " << repm.lambda_hi.n_inside
          << (repm.lambda_hi.vacuous ? " (hi vacuous by the D2 recipe)" : "");
        c.detail = d.str();
    });

    rep.total_seconds = seconds_since(t_start);

    // 15. Wall-clock budget for the whole suite.
    {
        CheckResult c;
        c.name = "suite-runtime";
        c.threshold = 600.0;
        c.measured = rep.total_seconds;
        c.pass = rep.total_seconds <= 600.0;
        c.detail = "total verify wall time in seconds";
        rep.checks.push_back(c);
    }

    rep.all_pass = true;
    for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
    return rep;
}

std::string verify_report_to_json(const VerifyReport& rep) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["all_pass"] = rep.all_pass;
    j["total_seconds"] = rep.total_seconds;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : rep.checks) {
        nlohmann::json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        cj["measured"] = c.measured;
        cj["tolerance"] = c.threshold;
        cj["detail"] = c.detail;
        cj["seconds"] = c.seconds;
        checks.push_back(cj);
    }
    j["checks"] = checks;
    return j.dump(2);
}

}  // namespace ymland
