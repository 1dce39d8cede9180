#include "ymland/reduced.hpp"

#include "ymland/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ymland {

namespace {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

constexpr double kPStep = 1e-4;
constexpr double kXiStep = 1e-4;
constexpr double kLambdaStep = 1e-6;

double chart_step(int i) { return i < 4 ? kPStep : (i < 7 ? kXiStep : kLambdaStep); }

ParamPoint shifted(const ParamPoint& q, const Vec8& u) {
    ParamPoint out = q;
    out.p += u.head<4>();
    const Vec3 xi(u[4], u[5], u[6]);
    if (xi.squaredNorm() > 0.0) out.R = so3_exp(xi) * q.R;
    out.lambda += u[7];
    return out;
}

Vec8 unit8(int i) {
    Vec8 e = Vec8::Zero();
    e[i] = 1.0;
    return e;
}

Vec8 fd_gradient(const ReducedModel& model, const ParamPoint& q, double eps) {
    Vec8 g;
    for (int i = 0; i < 8; ++i) {
        const double h = chart_step(i);
        const double ep = model.energy(shifted(q, h * unit8(i)), eps);
        const double em = model.energy(shifted(q, -h * unit8(i)), eps);
        g[i] = (ep - em) / (2.0 * h);
    }
    return g;
}

Mat8 fd_hessian(const ReducedModel& model, const ParamPoint& q, double eps) {
    Mat8 h;
    const double e0 = model.energy(q, eps);
    for (int i = 0; i < 8; ++i) {
        const double hi = chart_step(i);
        const double ep = model.energy(shifted(q, hi * unit8(i)), eps);
        const double em = model.energy(shifted(q, -hi * unit8(i)), eps);
        h(i, i) = (ep - 2.0 * e0 + em) / (hi * hi);
        for (int j = i + 1; j < 8; ++j) {
            const double hj = chart_step(j);
            const double epp = model.energy(shifted(q, hi * unit8(i) + hj * unit8(j)), eps);
            const double epm = model.energy(shifted(q, hi * unit8(i) - hj * unit8(j)), eps);
            const double emp = model.energy(shifted(q, -hi * unit8(i) + hj * unit8(j)), eps);
            const double emm = model.energy(shifted(q, -hi * unit8(i) - hj * unit8(j)), eps);
            h(i, j) = h(j, i) = (epp - epm - emp + emm) / (4.0 * hi * hj);
        }
    }
    return h;
}

// Damped Newton on the FD-gradient map; returns the achieved |g|.
double newton_polish(const ReducedModel& model, ParamPoint& q, double eps, double tol, int max_iter,
                     double p_radius_cap) {
    Vec8 g = fd_gradient(model, q, eps);
    double gn = g.norm();
    for (int iter = 0; iter < max_iter && gn > tol; ++iter) {
        Mat8 jac;
        for (int j = 0; j < 8; ++j) {
            const double hj = chart_step(j);
            const Vec8 gp = fd_gradient(model, shifted(q, hj * unit8(j)), eps);
            const Vec8 gm = fd_gradient(model, shifted(q, -hj * unit8(j)), eps);
            jac.col(j) = (gp - gm) / (2.0 * hj);
        }
        Vec8 du = jac.fullPivLu().solve(-g);
        if (!du.allFinite()) du = -g;  // singular Jacobian: fall back to descent on |g|
        // Trust caps per block.
        const double pn = du.head<4>().norm();
        if (pn > 0.05) du.head<4>() *= 0.05 / pn;
        const double xn = du.segment<3>(4).norm();
        if (xn > 0.1) du.segment<3>(4) *= 0.1 / xn;
        du[7] = std::clamp(du[7], -0.25 * q.lambda, 0.25 * q.lambda);

        double t = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 25; ++ls) {
            const ParamPoint qn = shifted(q, t * du);
            if (qn.lambda > 0.0 && qn.p.norm() < p_radius_cap) {
                const Vec8 gnew = fd_gradient(model, qn, eps);
                const double gn_new = gnew.norm();
                if (gn_new < gn) {
                    q = qn;
                    g = gnew;
                    gn = gn_new;
                    moved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!moved) break;
    }
    return gn;
}

// Deterministic Nelder-Mead over p in R^4.
Vec4 nelder_mead(const std::function<double(const Vec4&)>& f, const Vec4& start, double scale,
                 int max_iter) {
    constexpr int n = 4;
    std::array<Vec4, 5> x;
    std::array<double, 5> v;
    x[0] = start;
    for (int i = 0; i < n; ++i) {
        x[i + 1] = start;
        x[i + 1][i] += scale;
    }
    for (int i = 0; i <= n; ++i) v[i] = f(x[i]);

    for (int it = 0; it < max_iter; ++it) {
        std::array<int, 5> ord{0, 1, 2, 3, 4};
        std::sort(ord.begin(), ord.end(), [&](int a, int b) { return v[a] < v[b]; });
        std::array<Vec4, 5> xs;
        std::array<double, 5> vs;
        for (int i = 0; i <= n; ++i) {
            xs[i] = x[ord[i]];
            vs[i] = v[ord[i]];
        }
        x = xs;
        v = vs;
        if ((x[n] - x[0]).norm() < 1e-7 && std::abs(v[n] - v[0]) < 1e-14 * (1.0 + std::abs(v[0]))) break;

        Vec4 centroid = Vec4::Zero();
        for (int i = 0; i < n; ++i) centroid += x[i];
        centroid /= n;

        const Vec4 xr = centroid + (centroid - x[n]);
        const double vr = f(xr);
        if (vr < v[0]) {
            const Vec4 xe = centroid + 2.0 * (centroid - x[n]);
            const double ve = f(xe);
            if (ve < vr) {
                x[n] = xe;
                v[n] = ve;
            } else {
                x[n] = xr;
                v[n] = vr;
            }
        } else if (vr < v[n - 1]) {
            x[n] = xr;
            v[n] = vr;
        } else {
            const Vec4 xc = centroid + 0.5 * (x[n] - centroid);
            const double vc = f(xc);
            if (vc < v[n]) {
                x[n] = xc;
                v[n] = vc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    x[i] = x[0] + 0.5 * (x[i] - x[0]);
                    v[i] = f(x[i]);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i <= n; ++i)
        if (v[i] < v[best]) best = i;
    return x[best];
}

struct FiberCandidate {
    CriticalRotation cp;
    double value = 0.0;        // -2 eps^2 Gamma^2 / F
    double lambda_star = 0.0;
};

// Best (lowest) fiber value over the positive critical values at p.
std::optional<FiberCandidate> best_fiber(const ReducedModel& model, const Vec4& p, double eps) {
    const std::vector<CriticalRotation> cps = enumerate_critical(model.M(p));
    if (cps.empty() || cps.front().value <= 0.0) return std::nullopt;
    const double f = model.F(p);
    const auto fr = fiber_reduce(cps.front().value, eps, f);
    if (!fr) return std::nullopt;
    return FiberCandidate{cps.front(), fr->value, fr->lambda_star};
}

std::string face_name(const ParamPoint& q, const SearchWindow& w, double eps) {
    const double l2 = q.lambda * q.lambda;
    if (q.p.norm() >= (1.0 - w.d0) * (1.0 - 1e-9)) return "|p| = 1 - d0";
    if (l2 <= w.D1 * eps * (1.0 + 1e-9)) return "lambda^2 = D1 eps";
    return "lambda^2 = D2 eps";
}

}  // namespace

double reduced_energy(double lambda, double f_of_p, double tr_rm, double eps) {
    const double l2 = lambda * lambda;
    return 2.0 * l2 * l2 * f_of_p - 4.0 * eps * l2 * tr_rm;
}

std::optional<FiberResult> fiber_reduce(double gamma, double eps, double f_of_p) {
    if (gamma <= 0.0) return std::nullopt;
    FiberResult out;
    out.lambda_star = std::sqrt(eps * gamma / f_of_p);
    out.value = -2.0 * eps * eps * gamma * gamma / f_of_p;
    return out;
}

ReducedModel::ReducedModel(BoundarySpec spec, QuadratureSpec quad)
    : spec_(std::move(spec)), quad_(quad) {
    if (quad_.fixed_depth < 0) quad_ = smooth_tier(quad_);
}

QuadratureSpec ReducedModel::smooth_tier(QuadratureSpec base, int depth) {
    base.fixed_depth = depth;
    return base;
}

double ReducedModel::F(const Vec4& p) const {
    const Key key{p[0], p[1], p[2], p[3]};
    auto it = f_cache_.find(key);
    if (it == f_cache_.end()) it = f_cache_.emplace(key, F_value(p, quad_).value).first;
    return it->second;
}

const Mat3& ReducedModel::M(const Vec4& p) const {
    const Key key{p[0], p[1], p[2], p[3]};
    auto it = m_cache_.find(key);
    if (it == m_cache_.end()) it = m_cache_.emplace(key, M_decomposed(spec_, p, quad_).M).first;
    return it->second;
}

double ReducedModel::energy(const ParamPoint& q, double eps) const {
    return reduced_energy(q.lambda, F(q.p), (q.R * M(q.p)).trace(), eps);
}

SearchWindow suggest_window(const ReducedModel& model, double C0, double d0, int grid_per_axis,
                            std::uint64_t seed) {
    if (C0 <= 0.0 || d0 <= 0.0 || d0 >= 1.0)
        throw std::invalid_argument("suggest_window: need C0 > 0 and d0 in (0,1)");

    std::vector<Vec4> probes;
    const double rball = 1.0 - d0;
    const double half = 0.5 * rball;
    const int n = std::max(2, grid_per_axis);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    Vec4 p(-half + a * 2.0 * half / (n - 1), -half + b * 2.0 * half / (n - 1),
                           -half + c * 2.0 * half / (n - 1), -half + d * 2.0 * half / (n - 1));
                    if (p.norm() < rball * 0.999) probes.push_back(p);
                }
    // Near-boundary shell probes pick up the F maximum.
    const double shell = 0.995 * rball;
    for (int i = 0; i < 4; ++i) {
        Vec4 e = Vec4::Zero();
        e[i] = 1.0;
        probes.push_back(shell * e);
        probes.push_back(-shell * e);
    }
    SplitMix64 rng(seed);
    for (int k = 0; k < 8; ++k) probes.push_back(shell * random_unit4(rng));

    SearchWindow w;
    w.d0 = d0;
    w.C0 = C0;
    w.lambda0 = 0.99 * d0 / 2.0;
    w.C5 = std::numeric_limits<double>::infinity();
    for (const Vec4& p : probes) {
        const double f = model.F(p);
        w.C5 = std::min(w.C5, f);
        w.maxF = std::max(w.maxF, f);
        const SymSpectrum sp = sym_eigen(model.M(p).transpose() * model.M(p));
        const double gamma1p = std::sqrt(std::max(sp.mu[0], 0.0)) + std::sqrt(std::max(sp.mu[1], 0.0)) +
                               std::sqrt(std::max(sp.mu[2], 0.0));
        w.C4 = std::max(w.C4, gamma1p);
    }
    w.D2 = 2.0 * w.C4 / w.C5;
    const double d02 = d0 * d0;
    const double D = std::sqrt(C0 / (16.0 * d02 * d02 * w.maxF)) * (1.0 - 1e-9);
    w.D1 = D * d02;
    w.feasible = w.D1 > 0.0 && w.D1 < w.D2;
    return w;
}

std::vector<ReducedCritical> find_critical(const ReducedModel& model, const SearchWindow& window,
                                           double eps, SearchStrategy strategy, const FindOptions& opts) {
    if (!window.feasible || window.D1 <= 0.0 || window.D1 >= window.D2)
        throw std::invalid_argument("find_critical: infeasible window");
    if (std::sqrt(window.D2 * eps) >= window.lambda0)
        throw std::invalid_argument("find_critical: eps too large, sqrt(D2 eps) must stay below lambda0");

    const double rmax = (1.0 - window.d0) * (1.0 - 1e-6);
    const double grad_tol = 0.5 * opts.grad_tol_factor * eps * eps;

    // Candidate p's with the rotation branch to use at each.
    struct Seed {
        Vec4 p;
        double fiber_value;
    };
    std::vector<Seed> seeds;

    const auto objective = [&](const Vec4& p) {
        if (p.norm() > rmax) return 1e100 * (1.0 + p.squaredNorm());
        const auto cand = best_fiber(model, p, eps);
        return cand ? cand->value : 1e100;
    };

    if (strategy == SearchStrategy::Minimize) {
        SplitMix64 rng(opts.seed);
        std::vector<Vec4> starts;
        starts.push_back(Vec4::Zero());
        for (int s = 1; s < opts.multistart; ++s) starts.push_back(0.6 * rmax * random_ball4(rng));
        for (const Vec4& s : starts) {
            const Vec4 p = nelder_mead(objective, s, 0.05 * (1.0 - window.d0), 250);
            const double v = objective(p);
            if (v >= 1e99) continue;
            bool dup = false;
            for (const Seed& sd : seeds)
                if ((sd.p - p).norm() < 1e-4) dup = true;
            if (!dup) seeds.push_back({p, v});
        }
        std::sort(seeds.begin(), seeds.end(),
                  [](const Seed& a, const Seed& b) { return a.fiber_value < b.fiber_value; });
        if (seeds.size() > 3) seeds.resize(3);  // polish only the leaders
    } else {
        const int n = std::min(opts.grid_per_axis, 9);
        const double half = 0.5 * (1.0 - window.d0);
        // Branch key -> best grid point seen.
        std::map<std::array<int, 4>, std::pair<Vec4, double>> branch_best;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) {
                        Vec4 p(n == 1 ? 0.0 : -half + a * 2.0 * half / (n - 1),
                               n == 1 ? 0.0 : -half + b * 2.0 * half / (n - 1),
                               n == 1 ? 0.0 : -half + c * 2.0 * half / (n - 1),
                               n == 1 ? 0.0 : -half + d * 2.0 * half / (n - 1));
                        if (p.norm() > rmax) continue;
                        const Mat3 m = model.M(p);
                        const double f = model.F(p);
                        for (const CriticalRotation& cp : enumerate_critical(m)) {
                            if (cp.value <= 0.0) continue;
                            const std::array<int, 4> key{det_sign(m), cp.signs[0], cp.signs[1], cp.signs[2]};
                            const double g = cp.value * cp.value / f;
                            auto it = branch_best.find(key);
                            if (it == branch_best.end() || g > it->second.second)
                                branch_best[key] = {p, g};
                        }
                    }
        for (const auto& [key, best] : branch_best) {
            // Newton-refine the branch landscape G = Gamma^2 / F over p.
            Vec4 p = best.first;
            const auto branch_gamma = [&](const Vec4& pp) -> double {
                const Mat3 m = model.M(pp);
                for (const CriticalRotation& cp : enumerate_critical(m))
                    if (cp.signs[0] == key[1] && cp.signs[1] == key[2] && cp.signs[2] == key[3])
                        return cp.value;
                return -1.0;
            };
            const auto g_of = [&](const Vec4& pp) -> double {
                if (pp.norm() > rmax) return -1.0;
                const double gam = branch_gamma(pp);
                if (gam <= 0.0) return -1.0;
                return gam * gam / model.F(pp);
            };
            bool dead = false;
            for (int it = 0; it < 20 && !dead; ++it) {
                Vec4 grad;
                Mat4 hess;
                const double h = kPStep;
                const double g0 = g_of(p);
                if (g0 < 0.0) {
                    dead = true;
                    break;
                }
                std::array<double, 4> gp{}, gm{};
                for (int i = 0; i < 4; ++i) {
                    Vec4 pp = p, pm = p;
                    pp[i] += h;
                    pm[i] -= h;
                    gp[i] = g_of(pp);
                    gm[i] = g_of(pm);
                    if (gp[i] < 0.0 || gm[i] < 0.0) {
                        dead = true;
                        break;
                    }
                    grad[i] = (gp[i] - gm[i]) / (2.0 * h);
                }
                if (dead) break;
                for (int i = 0; i < 4; ++i) {
                    hess(i, i) = (gp[i] - 2.0 * g0 + gm[i]) / (h * h);
                    for (int j = i + 1; j < 4; ++j) {
                        Vec4 a = p, b = p, c = p, d = p;
                        a[i] += h; a[j] += h;
                        b[i] += h; b[j] -= h;
                        c[i] -= h; c[j] += h;
                        d[i] -= h; d[j] -= h;
                        const double v = (g_of(a) - g_of(b) - g_of(c) + g_of(d)) / (4.0 * h * h);
                        hess(i, j) = hess(j, i) = v;
                    }
                }
                if (grad.norm() < 1e-12 * (1.0 + std::abs(g0))) break;
                Vec4 step = hess.fullPivLu().solve(-grad);
                if (!step.allFinite()) break;
                if (step.norm() > 0.05) step *= 0.05 / step.norm();
                if ((p + step).norm() > rmax) break;
                p += step;
            }
            if (dead) continue;
            const double gam = branch_gamma(p);
            if (gam <= 0.0) continue;
            const auto fr = fiber_reduce(gam, eps, model.F(p));
            if (fr) seeds.push_back({p, fr->value});
        }
    }

    if (seeds.empty()) throw std::runtime_error("find_critical: no interior candidate found");

    std::vector<ReducedCritical> out;
    std::string violated_face;
    for (const Seed& sd : seeds) {
        const Mat3 m = model.M(sd.p);
        const std::vector<CriticalRotation> cps = enumerate_critical(m);
        // Rotation branch: the one whose fiber value matches this seed.
        const CriticalRotation* use = nullptr;
        double best_diff = std::numeric_limits<double>::infinity();
        for (const CriticalRotation& cp : cps) {
            if (cp.value <= 0.0) continue;
            const auto fr = fiber_reduce(cp.value, eps, model.F(sd.p));
            if (!fr) continue;
            const double diff = std::abs(fr->value - sd.fiber_value);
            if (diff < best_diff) {
                best_diff = diff;
                use = &cp;
            }
        }
        if (use == nullptr) continue;

        const SymSpectrum sp = sym_eigen(m.transpose() * m);
        const bool spectrum_degenerate =
            (sp.mu[0] - sp.mu[1] <= mu_tolerance(sp.mu)) || (sp.mu[1] - sp.mu[2] <= mu_tolerance(sp.mu));

        ReducedCritical rc;
        rc.epsilon = eps;
        rc.signs = use->signs;
        rc.q.p = sd.p;
        rc.q.R = use->R0;
        rc.q.lambda = fiber_reduce(use->value, eps, model.F(sd.p))->lambda_star;

        if (strategy == SearchStrategy::AllFibers && spectrum_degenerate) {
            rc.classification = "so3-degenerate";
            rc.grad_norm = fd_gradient(model, rc.q, eps).norm();
        } else {
            rc.grad_norm = newton_polish(model, rc.q, eps, grad_tol, opts.newton_max_iter, rmax);
            const Mat8 hess = fd_hessian(model, rc.q, eps);
            const Eigen::SelfAdjointEigenSolver<Mat8> es(hess);
            const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
            int negatives = 0;
            bool flat = false;
            for (int i = 0; i < 8; ++i) {
                if (es.eigenvalues()[i] < -1e-7 * scale)
                    ++negatives;
                else if (es.eigenvalues()[i] < 1e-7 * scale)
                    flat = true;
            }
            rc.saddle_index = negatives;
            rc.classification = flat ? "degenerate" : (negatives == 0 ? "min" : "saddle");
        }

        rc.value = model.energy(rc.q, eps);
        const double f = model.F(rc.q.p);
        rc.gamma = (rc.q.R * model.M(rc.q.p)).trace();
        rc.lambda_sq_residual = rc.q.lambda * rc.q.lambda - eps * rc.gamma / f;

        const double l2 = rc.q.lambda * rc.q.lambda;
        const bool interior = rc.q.p.norm() < (1.0 - window.d0) && l2 > window.D1 * eps &&
                              l2 < window.D2 * eps;
        if (!interior) {
            violated_face = face_name(rc.q, window, eps);
            continue;
        }
        out.push_back(rc);
    }

    if (out.empty()) {
        if (!violated_face.empty())
            throw std::runtime_error("find_critical: boundary attraction at face " + violated_face);
        throw std::runtime_error("find_critical: no interior critical point found");
    }
    std::sort(out.begin(), out.end(), [](const ReducedCritical& a, const ReducedCritical& b) {
        if (a.value != b.value) return a.value < b.value;
        return std::lexicographical_compare(a.q.p.data(), a.q.p.data() + 4, b.q.p.data(), b.q.p.data() + 4);
    });
    return out;
}

InvarianceReport check_flow_invariance(const ReducedModel& model, const SearchWindow& window, double eps,
                                       int n_samples, std::uint64_t seed) {
    if (!window.feasible) throw std::invalid_argument("check_flow_invariance: infeasible window");
    const double threshold = -window.C0 * eps * eps;
    const double rface = 1.0 - window.d0;
    const double l_lo = std::sqrt(window.D1 * eps);
    const double l_hi = std::sqrt(window.D2 * eps);

    InvarianceReport rep;
    rep.p_face.face = "|p| = 1 - d0";
    rep.lambda_lo.face = "lambda = sqrt(D1 eps)";
    rep.lambda_hi.face = "lambda = sqrt(D2 eps)";

    SplitMix64 root(seed);
    const auto run_face = [&](FaceReport& fr, int which) {
        SplitMix64 rng = root.split(static_cast<std::uint64_t>(which));
        double min_margin = std::numeric_limits<double>::infinity();
        for (int s = 0; s < n_samples; ++s) {
            ParamPoint q;
            q.R = random_rotation(rng);
            if (which == 0) {
                q.p = rface * random_unit4(rng);
                const double u = rng.next_double();
                q.lambda = std::sqrt(window.D1 * eps + u * (window.D2 - window.D1) * eps);
            } else {
                q.p = random_ball4(rng) * rface;
                q.lambda = (which == 1) ? l_lo : l_hi;
            }
            ++fr.n_sampled;
            if (model.energy(q, eps) > threshold) continue;
            ++fr.n_inside;
            double margin = 0.0;
            if (which == 0) {
                // Outward radial derivative of the energy at the p-face.
                const double h = kPStep;
                const Vec4 dir = q.p.normalized();
                ParamPoint qp = q, qm = q;
                qp.p += h * dir;
                qm.p -= h * dir;
                margin = (model.energy(qp, eps) - model.energy(qm, eps)) / (2.0 * h);
            } else {
                ParamPoint qp = q, qm = q;
                qp.lambda += kLambdaStep;
                qm.lambda -= kLambdaStep;
                const double dl = (model.energy(qp, eps) - model.energy(qm, eps)) / (2.0 * kLambdaStep);
                margin = (which == 1) ? -dl : dl;
            }
            min_margin = std::min(min_margin, margin);
        }
        fr.vacuous = fr.n_inside == 0;
        fr.margin = fr.vacuous ? std::numeric_limits<double>::infinity() : min_margin;
    };
    run_face(rep.p_face, 0);
    run_face(rep.lambda_lo, 1);
    run_face(rep.lambda_hi, 2);
    rep.all_positive = rep.p_face.margin > 0.0 && rep.lambda_lo.margin > 0.0 && rep.lambda_hi.margin > 0.0;
    return rep;
}

StildeReport stilde_set(const ReducedModel& model, const Vec4& p0, double eta, double eps, int n_samples,
                        std::uint64_t seed) {
    if (eta <= 0.0) throw std::invalid_argument("stilde_set: eta must be > 0");
    const Mat3 m = model.M(p0);
    const std::vector<CriticalRotation> cps = enumerate_critical(m);
    const double top = cps.front().value;
    if (eta >= top)
        throw std::domain_error("stilde_set: eta is above the top critical value; the set is empty");

    StildeReport rep;
    rep.eta = eta;
    rep.f_p0 = model.F(p0);
    rep.lambda0 = std::sqrt(eta * eps / rep.f_p0);
    rep.category = category_report(m);
    rep.bound = -(eta * eta / rep.f_p0) * eps * eps;

    SplitMix64 rng(seed);
    rep.max_energy = -std::numeric_limits<double>::infinity();
    const double slack = 1e-12 * std::abs(rep.bound);
    // The top critical rotation always belongs to the set; the rest come
    // from Haar rejection sampling.
    std::vector<Mat3> picks{cps.front().R0};
    long tries = 0;
    while (static_cast<int>(picks.size()) < n_samples && tries < 400L * n_samples) {
        ++tries;
        const Mat3 r = random_rotation(rng);
        if ((r * m).trace() >= eta) picks.push_back(r);
    }
    for (const Mat3& r : picks) {
        ParamPoint q{p0, r, rep.lambda0};
        const double e = model.energy(q, eps);
        ++rep.n_checked;
        rep.max_energy = std::max(rep.max_energy, e);
        if (e > rep.bound + slack) ++rep.n_violations;
    }
    return rep;
}

}  // namespace ymland
