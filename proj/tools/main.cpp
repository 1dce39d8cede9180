// ymland: landscape, rotation-group and reduced-energy computations for
// boundary-value families on the unit 4-ball. Subcommands: field,
// landscape scan, so3 crit, synth, perturb, reduce find|window|invariance|stilde,
// verify.

#include "ymland/acceptance.hpp"
#include "ymland/harmonic.hpp"
#include "ymland/io.hpp"
#include "ymland/landscape.hpp"
#include "ymland/reduced.hpp"
#include "ymland/so3crit.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace ymland;
using nlohmann::json;

namespace {

struct GlobalOpts {
    int quad_radial = 8;
    int quad_sphere = 10;  // psi = theta = N, phi = 2N
    double quad_tol = 1e-9;
    int quad_depth = -2;  // -2: per-command default, -1: adaptive, >=0: fixed
    long mc_samples = 200000;
    std::uint64_t seed = 0x5eedULL;
    std::string out;  // empty: stdout
    std::string format = "text";
};

QuadratureSpec make_quad(const GlobalOpts& g, int command_default_depth) {
    QuadratureSpec q;
    q.radial_order = g.quad_radial;
    q.psi_order = g.quad_sphere;
    q.theta_order = g.quad_sphere;
    q.phi_points = 2 * g.quad_sphere;
    q.target_rel_tol = g.quad_tol;
    q.mc_samples = g.mc_samples;
    q.seed = g.seed;
    q.fixed_depth = (g.quad_depth == -2) ? command_default_depth : g.quad_depth;
    return q;
}

void emit(const GlobalOpts& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out);
    if (!f) throw std::runtime_error("cannot write output file: " + g.out);
    f << text;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json mat3_json(const Mat3& m) {
    json rows = json::array();
    for (int i = 0; i < 3; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
    return rows;
}

json vec4_json(const Vec4& v) { return json{v[0], v[1], v[2], v[3]}; }

BoundarySpec spec_or_flat(const std::string& path) {
    if (path.empty()) return BoundarySpec({}, Mat3::Identity());
    return load_boundary_spec(path);
}

json critical_rotation_json(const CriticalRotation& cp) {
    json j;
    j["value"] = cp.value;
    j["signs"] = {cp.signs[0], cp.signs[1], cp.signs[2]};
    if (cp.morse_index >= 0)
        j["morse_index"] = cp.morse_index;
    else
        j["morse_index"] = nullptr;
    j["degenerate"] = cp.degenerate;
    j["hessian_diag"] = {cp.hessian_diag[0], cp.hessian_diag[1], cp.hessian_diag[2]};
    j["R0"] = mat3_json(cp.R0);
    j["B"] = mat3_json(cp.B);
    return j;
}

int cmd_field(const GlobalOpts& g, const std::string& p_str, const std::string& x_str) {
    const Vec4 p = parse_vec4(p_str);
    const Vec4 x = parse_vec4(x_str);
    json j;
    j["schema_version"] = kSchemaVersion;
    j["p"] = vec4_json(p);
    j["x"] = vec4_json(x);
    json alphas = json::array(), grads = json::array();
    for (int i = 1; i <= 4; ++i) {
        alphas.push_back(alpha_closed(p, i, x));
        const Vec4 gr = alpha_grad(p, i, x);
        grads.push_back({gr[0], gr[1], gr[2], gr[3]});
    }
    j["alpha"] = alphas;
    j["alpha_grad"] = grads;
    const OneForms3 h = h_oneforms(p, x);
    json hj = json::array();
    for (int l = 0; l < 3; ++l) hj.push_back({h[l][0], h[l][1], h[l][2], h[l][3]});
    j["h"] = hj;
    j["dh_asd"] = mat3_json(dh_asd(p, x));
    emit(g, j.dump(2) + "\n");
    return 0;
}

int cmd_landscape_scan(const GlobalOpts& g, const std::string& spec_path, int grid, double d0,
                       double box) {
    const BoundarySpec spec = spec_or_flat(spec_path);
    const QuadratureSpec quad = make_quad(g, 2);
    if (grid < 1) throw CLI::ValidationError("--grid must be >= 1");
    const double half = (box > 0.0 ? box : 0.5 * (1.0 - d0)) * 0.999;

    std::ostringstream csv;
    csv << "p1,p2,p3,p4,F,mu1,mu2,mu3,detM,Gamma1p,Gamma1m,Gamma2p,Gamma2m,Gamma3m,"
           "G1p,G1m,G2p,G2m,G3m,G10,G20\n";
    const auto coord = [&](int k) { return grid == 1 ? 0.0 : -half + 2.0 * half * k / (grid - 1); };
    for (int a = 0; a < grid; ++a)
        for (int b = 0; b < grid; ++b)
            for (int c = 0; c < grid; ++c)
                for (int d = 0; d < grid; ++d) {
                    const Vec4 p(coord(a), coord(b), coord(c), coord(d));
                    const LandscapeSample s = landscape_sample(spec, p, quad);
                    const double vals[] = {p[0],      p[1],      p[2],      p[3],      s.F,
                                           s.M.spectrum.mu[0], s.M.spectrum.mu[1], s.M.spectrum.mu[2],
                                           s.M.detM,  s.gamma1p, s.gamma1m, s.gamma2p, s.gamma2m,
                                           s.gamma3m, s.g1p,     s.g1m,     s.g2p,     s.g2m,
                                           s.g3m,     s.g10,     s.g20};
                    for (std::size_t i = 0; i < std::size(vals); ++i)
                        csv << (i ? "," : "") << fmt(vals[i]);
                    csv << "\n";
                }
    emit(g, csv.str());
    return 0;
}

int cmd_so3_crit(const GlobalOpts& g, const std::string& m_str, const std::string& m_file) {
    Mat3 m;
    if (!m_file.empty()) {
        std::ifstream f(m_file);
        if (!f) throw std::runtime_error("cannot open matrix file: " + m_file);
        std::stringstream ss;
        ss << f.rdbuf();
        m = parse_matrix3(ss.str());
    } else {
        m = parse_matrix3(m_str);
    }
    const auto cps = enumerate_critical(m);

    if (g.format == "json") {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["M"] = mat3_json(m);
        json arr = json::array();
        for (const auto& cp : cps) arr.push_back(critical_rotation_json(cp));
        j["critical_points"] = arr;
        emit(g, j.dump(2) + "\n");
    } else {
        std::ostringstream t;
        t << "value        signs     index  degenerate\n";
        for (const auto& cp : cps) {
            char line[128];
            std::snprintf(line, sizeof(line), "%-12.6g (%+d,%+d,%+d)  %-5s  %s\n", cp.value, cp.signs[0],
                          cp.signs[1], cp.signs[2],
                          cp.morse_index >= 0 ? std::to_string(cp.morse_index).c_str() : "-",
                          cp.degenerate ? "yes" : "no");
            t << line;
        }
        emit(g, t.str());
    }
    return 0;
}

int cmd_synth(const GlobalOpts& g, const std::string& target_str, const std::string& p_str,
              const std::string& base_path) {
    const Mat3 target = parse_matrix3(target_str);
    const Vec4 p0 = parse_vec4(p_str);
    std::array<PolyOneForm, 3> base;
    if (!base_path.empty()) base = load_boundary_spec(base_path).base();
    const QuadratureSpec quad = make_quad(g, -1);
    const BoundarySpec spec = synthesize(target, p0, base, quad);
    emit(g, boundary_spec_to_json(spec) + "\n");
    return 0;
}

int cmd_perturb(const GlobalOpts& g, const std::string& spec_path, const std::string& p_str, double mu) {
    const BoundarySpec spec = load_boundary_spec(spec_path);
    const Vec4 p0 = parse_vec4(p_str);
    const QuadratureSpec quad = make_quad(g, -1);
    const BoundarySpec pert = perturb_nondegenerate(spec, p0, mu, quad);
    emit(g, boundary_spec_to_json(pert) + "\n");
    return 0;
}

SearchWindow window_from(const ReducedModel& model, const std::string& window_str, double C0, double d0,
                         std::uint64_t seed) {
    if (!window_str.empty()) {
        std::string rest = window_str;
        for (char& ch : rest)
            if (ch == ',') ch = ' ';
        std::istringstream ss(rest);
        SearchWindow w;
        if (!(ss >> w.d0 >> w.D1 >> w.D2 >> w.C0))
            throw CLI::ValidationError("--window expects d0,D1,D2,C0");
        w.lambda0 = 0.99 * w.d0 / 2.0;
        w.feasible = w.D1 > 0.0 && w.D1 < w.D2;
        return w;
    }
    return suggest_window(model, C0, d0, 4, seed);
}

json window_json(const SearchWindow& w) {
    json j;
    j["d0"] = w.d0;
    j["lambda0"] = w.lambda0;
    j["D1"] = w.D1;
    j["D2"] = w.D2;
    j["C0"] = w.C0;
    j["feasible"] = w.feasible;
    j["C4"] = w.C4;
    j["C5"] = w.C5;
    j["maxF"] = w.maxF;
    return j;
}

int cmd_reduce_find(const GlobalOpts& g, const std::string& spec_path, double eps,
                    const std::string& window_str, double C0, double d0, const std::string& strategy,
                    int multistart, int grid) {
    const BoundarySpec spec = spec_or_flat(spec_path);
    const ReducedModel model(spec, make_quad(g, 2));
    const SearchWindow w = window_from(model, window_str, C0, d0, g.seed);
    FindOptions opts;
    opts.seed = g.seed;
    if (multistart > 0) opts.multistart = multistart;
    if (grid > 0) opts.grid_per_axis = grid;
    const SearchStrategy strat =
        strategy == "all-fibers" ? SearchStrategy::AllFibers : SearchStrategy::Minimize;

    const auto crits = find_critical(model, w, eps, strat, opts);

    json j;
    j["schema_version"] = kSchemaVersion;
    j["epsilon"] = eps;
    j["strategy"] = strategy;
    j["window"] = window_json(w);
    json arr = json::array();
    for (const auto& rc : crits) {
        json c;
        c["p"] = vec4_json(rc.q.p);
        c["R"] = mat3_json(rc.q.R);
        c["lambda"] = rc.q.lambda;
        c["value"] = rc.value;
        c["grad_norm"] = rc.grad_norm;
        c["classification"] = rc.classification;
        c["saddle_index"] = rc.saddle_index;
        c["gamma"] = rc.gamma;
        c["lambda_sq_residual"] = rc.lambda_sq_residual;
        c["signs"] = {rc.signs[0], rc.signs[1], rc.signs[2]};
        arr.push_back(c);
    }
    j["criticals"] = arr;
    emit(g, j.dump(2) + "\n");
    return 0;
}

int cmd_reduce_window(const GlobalOpts& g, const std::string& spec_path, double C0, double d0) {
    const ReducedModel model(spec_or_flat(spec_path), make_quad(g, 2));
    const SearchWindow w = suggest_window(model, C0, d0, 4, g.seed);
    json j;
    j["schema_version"] = kSchemaVersion;
    j["window"] = window_json(w);
    emit(g, j.dump(2) + "\n");
    return 0;
}

int cmd_reduce_invariance(const GlobalOpts& g, const std::string& spec_path, double eps,
                          const std::string& window_str, double C0, double d0, int samples) {
    const ReducedModel model(spec_or_flat(spec_path), make_quad(g, 1));
    const SearchWindow w = window_from(model, window_str, C0, d0, g.seed);
    const auto rep = check_flow_invariance(model, w, eps, samples, g.seed);
    json j;
    j["schema_version"] = kSchemaVersion;
    j["epsilon"] = eps;
    j["window"] = window_json(w);
    const auto face_json = [](const FaceReport& f) {
        json fj;
        fj["face"] = f.face;
        fj["margin"] = f.vacuous ? json("inf") : json(f.margin);
        fj["n_inside"] = f.n_inside;
        fj["n_sampled"] = f.n_sampled;
        fj["vacuous"] = f.vacuous;
        return fj;
    };
    j["faces"] = {face_json(rep.p_face), face_json(rep.lambda_lo), face_json(rep.lambda_hi)};
    j["all_positive"] = rep.all_positive;
    emit(g, j.dump(2) + "\n");
    return rep.all_positive ? 0 : 1;
}

int cmd_reduce_stilde(const GlobalOpts& g, const std::string& spec_path, const std::string& p_str,
                      double eta, double eps, int samples) {
    const ReducedModel model(spec_or_flat(spec_path), make_quad(g, 2));
    const auto rep = stilde_set(model, parse_vec4(p_str), eta, eps, samples, g.seed);
    json j;
    j["schema_version"] = kSchemaVersion;
    j["eta"] = rep.eta;
    j["lambda0"] = rep.lambda0;
    j["F_p0"] = rep.f_p0;
    j["bound"] = rep.bound;
    j["max_energy"] = rep.max_energy;
    j["n_checked"] = rep.n_checked;
    j["n_violations"] = rep.n_violations;
    json cat;
    cat["applicable"] = rep.category.applicable;
    cat["case"] = rep.category.case_tag;
    cat["eta"] = rep.category.eta;
    cat["cat_lower_bound"] = rep.category.cat_lower_bound;
    cat["positive_values_above_eta"] = rep.category.positive_values_above_eta;
    j["category"] = cat;
    emit(g, j.dump(2) + "\n");
    return rep.n_violations == 0 ? 0 : 1;
}

int cmd_verify(const GlobalOpts& g) {
    VerifyOptions opts;
    opts.quad = make_quad(g, -1);
    opts.seed = g.seed;
    const VerifyReport rep = run_verify(opts);

    if (g.format == "json") {
        emit(g, verify_report_to_json(rep) + "\n");
    } else {
        std::ostringstream t;
        int idx = 0;
        for (const auto& c : rep.checks) {
            char line[512];
            std::snprintf(line, sizeof(line), "[%2d/%zu] %s  %-34s measured=%.6g tol=%.6g (%.1fs)\n",
                          ++idx, rep.checks.size(), c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                          c.threshold, c.seconds);
            t << line;
            if (!c.pass) t << "        " << c.detail << "\n";
        }
        char total[160];
        std::snprintf(total, sizeof(total), "%s: %zu checks in %.1fs\n",
                      rep.all_pass ? "ALL PASS" : "FAILURES PRESENT", rep.checks.size(),
                      rep.total_seconds);
        t << total;
        emit(g, t.str());
    }
    return rep.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Landscape, rotation-group and reduced-energy computations on the unit 4-ball"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--quad-radial", g.quad_radial, "Gauss-Legendre points per radial panel");
    app.add_option("--quad-sphere", g.quad_sphere, "angular order (psi/theta; phi uses twice this)");
    app.add_option("--quad-tol", g.quad_tol, "target relative tolerance for adaptive quadrature");
    app.add_option("--quad-depth", g.quad_depth, "fixed grading depth (-1 adaptive, default per command)");
    app.add_option("--mc-samples", g.mc_samples, "Monte Carlo sample count");
    app.add_option("--seed", g.seed, "seed for all randomized operations");
    app.add_option("--out", g.out, "output file (default stdout)");
    app.add_option("--format", g.format, "output format: text, json, csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    // field
    auto* field = app.add_subcommand("field", "evaluate alpha, grad alpha, h and (dh)^- at (p, x)");
    std::string field_p = "0,0,0,0", field_x = "0,0,0,0";
    field->add_option("--p", field_p, "concentration point p (4 reals)")->required();
    field->add_option("--x", field_x, "evaluation point x (4 reals)")->required();

    // landscape scan
    auto* landscape = app.add_subcommand("landscape", "landscape scans");
    landscape->require_subcommand(1);
    auto* scan = landscape->add_subcommand("scan", "CSV scan of F, spectrum and G values on a p-grid");
    std::string scan_spec;
    int scan_grid = 5;
    double scan_d0 = 0.5, scan_box = 0.0;
    scan->add_option("--spec", scan_spec, "boundary spec JSON (default: base 0, A = I)");
    scan->add_option("--grid", scan_grid, "points per axis");
    scan->add_option("--d0", scan_d0, "window margin d0 (box stays inside B_{1-d0})");
    scan->add_option("--box", scan_box, "explicit box half-width");

    // so3 crit
    auto* so3 = app.add_subcommand("so3", "critical points of Tr(RM) on SO(3)");
    so3->require_subcommand(1);
    auto* crit = so3->add_subcommand("crit", "enumerate critical rotations");
    std::string crit_m, crit_mfile;
    crit->add_option("--M", crit_m, "matrix: 9 reals row-major or diag:a,b,c");
    crit->add_option("--M-file", crit_mfile, "file containing the matrix");

    // synth
    auto* synth = app.add_subcommand("synth", "synthesize a boundary spec achieving a target matrix");
    std::string synth_target, synth_p = "0,0,0,0", synth_base;
    synth->add_option("--target", synth_target, "target interaction matrix")->required();
    synth->add_option("--p", synth_p, "synthesis point p0");
    synth->add_option("--base", synth_base, "boundary spec JSON providing the base 1-forms");

    // perturb
    auto* perturb = app.add_subcommand("perturb", "split the interaction spectrum by a small shift");
    std::string pert_spec, pert_p = "0,0,0,0";
    double pert_mu = 0.01;
    perturb->add_option("--spec", pert_spec, "boundary spec JSON")->required();
    perturb->add_option("--p", pert_p, "base point p0");
    perturb->add_option("--mu", pert_mu, "perturbation size mu > 0");

    // reduce
    auto* reduce = app.add_subcommand("reduce", "reduced-energy operations");
    reduce->require_subcommand(1);
    std::string red_spec, red_window, red_strategy = "minimize", red_p0 = "0,0,0,0";
    double red_eps = 0.01, red_C0 = 1.0, red_d0 = 0.5, red_eta = 1.0;
    int red_multistart = 0, red_grid = 0, red_samples = 200;

    auto* rfind = reduce->add_subcommand("find", "locate critical points of the reduced energy");
    rfind->add_option("--spec", red_spec, "boundary spec JSON (default: base 0, A = I)");
    rfind->add_option("--eps", red_eps, "epsilon");
    rfind->add_option("--window", red_window, "window d0,D1,D2,C0 (default: recipe)");
    rfind->add_option("--C0", red_C0, "recipe constant C0");
    rfind->add_option("--d0", red_d0, "recipe margin d0");
    rfind->add_option("--strategy", red_strategy, "minimize | all-fibers")
        ->check(CLI::IsMember({"minimize", "all-fibers"}));
    rfind->add_option("--multistart", red_multistart, "multistart count (minimize)");
    rfind->add_option("--grid", red_grid, "p-grid per axis (all-fibers)");

    auto* rwindow = reduce->add_subcommand("window", "suggest a search window");
    rwindow->add_option("--spec", red_spec, "boundary spec JSON");
    rwindow->add_option("--C0", red_C0, "recipe constant C0");
    rwindow->add_option("--d0", red_d0, "recipe margin d0");

    auto* rinv = reduce->add_subcommand("invariance", "flow-invariance margins on the window faces");
    rinv->add_option("--spec", red_spec, "boundary spec JSON");
    rinv->add_option("--eps", red_eps, "epsilon");
    rinv->add_option("--window", red_window, "window d0,D1,D2,C0 (default: recipe)");
    rinv->add_option("--C0", red_C0, "recipe constant C0");
    rinv->add_option("--d0", red_d0, "recipe margin d0");
    rinv->add_option("--samples", red_samples, "samples per face");

    auto* rstilde = reduce->add_subcommand("stilde", "sublevel rotation set at a fixed p0");
    rstilde->add_option("--spec", red_spec, "boundary spec JSON");
    rstilde->add_option("--p0", red_p0, "concentration point p0");
    rstilde->add_option("--eta", red_eta, "level eta > 0");
    rstilde->add_option("--eps", red_eps, "epsilon");
    rstilde->add_option("--samples", red_samples, "rotation samples");

    // verify
    auto* verify = app.add_subcommand("verify", "run the identity/property acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*field) return cmd_field(g, field_p, field_x);
        if (*scan) return cmd_landscape_scan(g, scan_spec, scan_grid, scan_d0, scan_box);
        if (*crit) {
            if (crit_m.empty() && crit_mfile.empty())
                throw CLI::ValidationError("so3 crit: provide --M or --M-file");
            return cmd_so3_crit(g, crit_m, crit_mfile);
        }
        if (*synth) return cmd_synth(g, synth_target, synth_p, synth_base);
        if (*perturb) return cmd_perturb(g, pert_spec, pert_p, pert_mu);
        if (*rfind)
            return cmd_reduce_find(g, red_spec, red_eps, red_window, red_C0, red_d0, red_strategy,
                                   red_multistart, red_grid);
        if (*rwindow) return cmd_reduce_window(g, red_spec, red_C0, red_d0);
        if (*rinv)
            return cmd_reduce_invariance(g, red_spec, red_eps, red_window, red_C0, red_d0, red_samples);
        if (*rstilde) return cmd_reduce_stilde(g, red_spec, red_p0, red_eta, red_eps, red_samples);
        if (*verify) return cmd_verify(g);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
