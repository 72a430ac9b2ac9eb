// Command-line pipeline: profile construction, closure search, Hopf lift,
// binormal evolution, energy recovery, and the full verification suite.
#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ct/binormal_evolution.hpp"
#include "ct/mesh_io.hpp"
#include "ct/verification.hpp"

namespace {

struct Options {
    std::string energy = "extended_blaschke";
    double lambda = 0.0;
    double q = 0.5;
    int epsilon = +1;
    double rho = 4.0;
    std::optional<double> d;
    std::optional<int> m, n;
    double d_min = 0.1, d_max = 10.0;  // closure-search bracket
    int samples = 1024;
    int n_t = 256;
    double tol_el = 1e-6;
    double tol_first_integral = 1e-8;
    double tol_closure = 1e-6;
    double tol_vertical = 1e-4;
    double tol_weingarten = 1e-6;
    double tol_recover = 1e-3;
    std::string out_dir = ".";
};

ct::EnergySpec make_spec(const Options& o) {
    using ct::EnergySpec;
    if (o.energy == "bending") return EnergySpec::bending(o.lambda);
    if (o.energy == "extended_blaschke") return EnergySpec::extended_blaschke(o.lambda);
    if (o.energy == "total_curvature") return EnergySpec::total_curvature(o.lambda, o.epsilon);
    if (o.energy == "astigmatism") return EnergySpec::astigmatism(o.lambda);
    if (o.energy == "exponential") return EnergySpec::exponential(o.lambda);
    if (o.energy == "q_elastic") return EnergySpec::q_elastic(o.lambda, o.q);
    throw ct::ConfigError("unknown energy kind: " + o.energy);
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ct::ConfigError("cannot read config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ct::ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

void apply_config(Options& o, const std::map<std::string, std::string>& kv) {
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    try {
        if (auto* v = get("energy")) o.energy = *v;
        if (auto* v = get("lambda")) o.lambda = std::stod(*v);
        if (auto* v = get("q")) o.q = std::stod(*v);
        if (auto* v = get("epsilon")) o.epsilon = std::stoi(*v);
        if (auto* v = get("rho")) o.rho = std::stod(*v);
        if (auto* v = get("d")) o.d = std::stod(*v);
        if (auto* v = get("m")) o.m = std::stoi(*v);
        if (auto* v = get("n")) o.n = std::stoi(*v);
        if (auto* v = get("d_min")) o.d_min = std::stod(*v);
        if (auto* v = get("d_max")) o.d_max = std::stod(*v);
        if (auto* v = get("samples")) o.samples = std::stoi(*v);
        if (auto* v = get("n_t")) o.n_t = std::stoi(*v);
        if (auto* v = get("tol_el")) o.tol_el = std::stod(*v);
        if (auto* v = get("tol_first_integral")) o.tol_first_integral = std::stod(*v);
        if (auto* v = get("tol_closure")) o.tol_closure = std::stod(*v);
        if (auto* v = get("tol_vertical")) o.tol_vertical = std::stod(*v);
        if (auto* v = get("tol_weingarten")) o.tol_weingarten = std::stod(*v);
        if (auto* v = get("tol_recover")) o.tol_recover = std::stod(*v);
        if (auto* v = get("out")) o.out_dir = *v;
    } catch (const std::invalid_argument&) {
        throw ct::ConfigError("config: malformed numeric value");
    }
}

std::string out_path(const Options& o, const std::string& name) {
    std::filesystem::create_directories(o.out_dir);
    return (std::filesystem::path(o.out_dir) / name).string();
}

std::vector<std::string> provenance(const Options& o) {
    return {"energy=" + o.energy + " lambda=" + ct::format_g17(o.lambda),
            "rho=" + ct::format_g17(o.rho) +
                (o.d ? " d=" + ct::format_g17(*o.d) : std::string()) +
                (o.m ? " m=" + std::to_string(*o.m) + " n=" + std::to_string(*o.n)
                     : std::string()),
            "samples=" + std::to_string(o.samples) + " n_t=" + std::to_string(o.n_t)};
}

std::vector<ct::Vec3> to_vec3(const std::vector<ct::Vec4>& v4, double rho) {
    std::vector<ct::Vec3> out;
    out.reserve(v4.size());
    if (rho > 0.0) {
        ct::ProjectedMesh dummy;  // projection handled by caller for rho > 0
        (void)dummy;
    }
    for (const auto& p : v4) out.push_back({p[0], p[1], p[2]});
    return out;
}

// --- subcommand bodies; each returns the process exit code ---

int cmd_profile(const Options& o) {
    if (!o.d) throw ct::ConfigError("profile: requires d");
    const ct::EnergySpec spec = make_spec(o);
    const ct::CurvatureProfile prof = ct::make_profile(spec, o.rho, *o.d, o.samples);
    {
        std::ofstream out(out_path(o, "profile.txt"));
        ct::write_profile(prof, out);
    }
    const double el = ct::el_residual(prof);
    const auto fi = ct::first_integral_check(prof);
    const bool pass = el <= o.tol_el && fi.deviation <= o.tol_first_integral;
    ct::write_report(out_path(o, "profile_report.txt"),
                     {{"check", "curvature Euler-Lagrange residual and first integral"},
                      {"max_el_residual", ct::format_g17(el)},
                      {"tol_el", ct::format_g17(o.tol_el)},
                      {"d_est", ct::format_g17(fi.d_est)},
                      {"first_integral_deviation", ct::format_g17(fi.deviation)},
                      {"tol_first_integral", ct::format_g17(o.tol_first_integral)},
                      {"status", pass ? "pass" : "fail"}});
    std::printf("profile: el_residual=%.3e d_est=%.12g deviation=%.3e -> %s\n", el, fi.d_est,
                fi.deviation, pass ? "pass" : "fail");
    return pass ? 0 : 1;
}

int cmd_close(const Options& o) {
    if (!o.m || !o.n) throw ct::ConfigError("close: requires m and n");
    const ct::EnergySpec spec = make_spec(o);
    const ct::ClosureResult cl = ct::closure_search(spec, o.rho, *o.m, *o.n, {o.d_min, o.d_max});
    const ct::SphereCurve& curve = cl.curve;
    {
        std::ofstream out(out_path(o, "curve.txt"));
        ct::write_curve(curve, out);
    }
    ct::write_obj_polyline(out_path(o, "curve.obj"), curve.points);
    const ct::CurveStats stats = ct::curve_stats(curve, spec);
    const bool pass = curve.closure_gap <= o.tol_closure;
    ct::write_report(out_path(o, "close_report.txt"),
                     {{"check", "progression-angle closure Lambda = 2*pi*n/m"},
                      {"d_star", ct::format_g17(cl.d_star)},
                      {"closure_gap", ct::format_g17(curve.closure_gap)},
                      {"tol_closure", ct::format_g17(o.tol_closure)},
                      {"length", ct::format_g17(stats.length)},
                      {"energy", ct::format_g17(stats.energy)},
                      {"area", ct::format_g17(stats.area)},
                      {"constraint_warning", cl.constraint_warning ? "yes" : "no"},
                      {"status", pass ? "pass" : "fail"}});
    std::printf("close: d_star=%.12g closure_gap=%.3e -> %s\n", cl.d_star, curve.closure_gap,
                pass ? "pass" : "fail");
    return pass ? 0 : 1;
}

ct::SphereCurve build_curve(const Options& o, const ct::EnergySpec& spec, double* d_used) {
    if (o.m && o.n) {
        const ct::ClosureResult cl =
            ct::closure_search(spec, o.rho, *o.m, *o.n, {o.d_min, o.d_max});
        const ct::CurvatureProfile prof = ct::make_profile(spec, o.rho, cl.d_star, o.samples);
        *d_used = cl.d_star;
        return ct::reconstruct(prof, o.rho, *o.m, o.samples);
    }
    if (!o.d) throw ct::ConfigError("need either d or (m, n)");
    *d_used = *o.d;
    const ct::CurvatureProfile prof = ct::make_profile(spec, o.rho, *o.d, o.samples);
    return ct::reconstruct(prof, o.rho, 1, 0);
}

int cmd_lift(const Options& o) {
    const ct::EnergySpec spec = make_spec(o);
    double d_used = 0.0;
    const ct::SphereCurve curve = build_curve(o, spec, &d_used);
    const ct::HopfLift lift = ct::horizontal_lift(curve);
    const ct::VerticalTorusMesh mesh = ct::hopf_torus(lift, lift.m_cover.value_or(1), o.n_t);
    const ct::VerticalReport rep = ct::verify_vertical_geometry(mesh);
    const ct::ProjectedMesh proj = ct::project_mesh(mesh.vertices, mesh.n_s, mesh.n_t, 1.0);
    ct::write_obj_quads(out_path(o, "hopf_torus.obj"), proj.vertices, proj.n_s, proj.n_t);
    const bool pass = rep.max_h_defect <= o.tol_vertical && rep.max_gauss <= o.tol_vertical;
    ct::write_report(out_path(o, "lift_report.txt"),
                     {{"check", "vertical torus: 2H = kappa and flatness"},
                      {"d", ct::format_g17(d_used)},
                      {"holonomy_per_cover", ct::format_g17(lift.holonomy_per_cover)},
                      {"m_cover", lift.m_cover ? std::to_string(*lift.m_cover) : "none"},
                      {"max_h_defect", ct::format_g17(rep.max_h_defect)},
                      {"max_gauss", ct::format_g17(rep.max_gauss)},
                      {"tol_vertical", ct::format_g17(o.tol_vertical)},
                      {"status", pass ? "pass" : "fail"}});
    std::printf("lift: max|H-kappa/2|=%.3e max|K_S|=%.3e -> %s\n", rep.max_h_defect,
                rep.max_gauss, pass ? "pass" : "fail");
    return pass ? 0 : 1;
}

int cmd_evolve(const Options& o) {
    const ct::EnergySpec spec = make_spec(o);
    double d_used = 0.0;
    const ct::SphereCurve curve = build_curve(o, spec, &d_used);
    const ct::CurvatureProfile prof = ct::make_profile(spec, o.rho, d_used, o.samples);
    auto [emb, motion] = ct::embed_and_fit(curve, prof, spec, o.rho);
    const ct::EvolutionTorusMesh mesh = ct::evolve(emb, motion, prof, o.n_t);
    const ct::CurvatureReport rep = ct::surface_curvatures(mesh, prof);
    const double wres = ct::weingarten_residual(prof);

    std::vector<ct::Vec3> verts;
    if (o.rho > 0.0) {
        verts = ct::project_mesh(mesh.vertices, mesh.n_s, mesh.n_t, 1.0 / std::sqrt(o.rho))
                    .vertices;
    } else {
        verts = to_vec3(mesh.vertices, 0.0);
    }
    ct::write_obj_quads(out_path(o, "evolution_torus.obj"), verts, mesh.n_s, mesh.n_t);

    std::vector<double> col_s, col_t, c1, c2, cH, cK;
    for (int j = 0; j < mesh.n_s; ++j)
        for (int k = 0; k < mesh.n_t; ++k) {
            const size_t idx = static_cast<size_t>(j) * mesh.n_t + k;
            col_s.push_back(j * mesh.step_s);
            col_t.push_back(k * mesh.step_t);
            c1.push_back(rep.kappa1[idx]);
            c2.push_back(rep.kappa2[idx]);
            cH.push_back(rep.H[idx]);
            cK.push_back(rep.K[idx]);
        }
    ct::write_columns(out_path(o, "evolution_fields.txt"), provenance(o),
                      {"s", "t", "kappa1", "kappa2", "H", "K"}, {col_s, col_t, c1, c2, cH, cK});

    const bool pass = motion.fit_residual <= 1e-5 && wres <= o.tol_weingarten &&
                      rep.max_k1_defect <= o.tol_vertical && rep.max_k2_defect <= o.tol_vertical;
    ct::write_report(
        out_path(o, "evolve_report.txt"),
        {{"check", "binormal evolution: principal curvatures and Weingarten relation"},
         {"d", ct::format_g17(d_used)},
         {"killing_fit_residual", ct::format_g17(motion.fit_residual)},
         {"weingarten_residual", ct::format_g17(wres)},
         {"tol_weingarten", ct::format_g17(o.tol_weingarten)},
         {"max_kappa1_defect", ct::format_g17(rep.max_k1_defect)},
         {"max_kappa2_defect", ct::format_g17(rep.max_k2_defect)},
         {"masked_vertices", std::to_string(rep.masked)},
         {"status", pass ? "pass" : "fail"}});
    std::printf("evolve: weingarten_residual=%.3e k1_defect=%.3e k2_defect=%.3e -> %s\n", wres,
                rep.max_k1_defect, rep.max_k2_defect, pass ? "pass" : "fail");
    return pass ? 0 : 1;
}

int cmd_recover(const Options& o) {
    const ct::EnergySpec spec = make_spec(o);
    double d_used = 0.0;
    const ct::SphereCurve curve = build_curve(o, spec, &d_used);
    const ct::CurvatureProfile prof = ct::make_profile(spec, o.rho, d_used, o.samples);
    auto [emb, motion] = ct::embed_and_fit(curve, prof, spec, o.rho);
    const ct::RecoveredEnergy rec = ct::recover_energy(ct::evolve(emb, motion, prof, 16));
    const bool pass = rec.spec.kind == spec.kind && rec.rel_residual <= o.tol_recover;
    ct::write_report(out_path(o, "recover_report.txt"),
                     {{"check", "energy recovery from the swept surface (converse direction)"},
                      {"d", ct::format_g17(d_used)},
                      {"recovered_kind", ct::to_string(rec.spec.kind)},
                      {"recovered_lambda", ct::format_g17(rec.spec.lambda)},
                      {"rel_residual", ct::format_g17(rec.rel_residual)},
                      {"tol_recover", ct::format_g17(o.tol_recover)},
                      {"status", pass ? "pass" : "fail"}});
    std::printf("recover: kind=%s lambda=%.12g rel_residual=%.3e -> %s\n",
                ct::to_string(rec.spec.kind).c_str(), rec.spec.lambda, rec.rel_residual,
                pass ? "pass" : "fail");
    return pass ? 0 : 1;
}

int cmd_verify(const Options& o) {
    const std::vector<ct::CriterionResult> results = ct::run_all_criteria();
    bool all = true;
    std::vector<std::pair<std::string, std::string>> report;
    int idx = 0;
    for (const auto& r : results) {
        ++idx;
        all = all && r.pass;
        std::printf("criterion %d (%s): %s [%s]\n", idx, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.detail.c_str());
        report.emplace_back("criterion_" + std::to_string(idx) + " (" + r.name + ")",
                            std::string(r.pass ? "pass" : "fail") + "; " + r.detail);
    }
    report.emplace_back("status", all ? "pass" : "fail");
    ct::write_report(out_path(o, "verify_report.txt"), report);
    return all ? 0 : 1;
}

int cmd_figure1(const Options& base) {
    Options o = base;
    o.energy = "extended_blaschke";
    o.lambda = 0.0;
    o.rho = 4.0;
    o.m = 3;
    o.n = 2;
    o.d_min = 1.2;
    o.d_max = 2.0;
    const int rc_close = cmd_close(o);
    const int rc_lift = cmd_lift(o);
    const int rc_evolve = cmd_evolve(o);
    return (rc_close == 0 && rc_lift == 0 && rc_evolve == 0) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"critical curvature tori: profiles, closures, lifts, evolutions"};
    app.require_subcommand(1);

    Options opts;
    if (const char* env = std::getenv("CT_OUT_DIR")) opts.out_dir = env;
    std::string config_path;

    // flags mirror config keys one-to-one; flag values override the file
    struct Flagged {
        CLI::App* sub;
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value config file");
        sub->add_option("--energy", opts.energy,
                        "bending | extended_blaschke | total_curvature | astigmatism | "
                        "exponential | q_elastic");
        sub->add_option("--lambda", opts.lambda, "energy parameter");
        sub->add_option("--q", opts.q, "q_elastic exponent");
        sub->add_option("--epsilon", opts.epsilon, "total_curvature sign");
        sub->add_option("--rho", opts.rho, "base sphere curvature (0 = plane)");
        sub->add_option("--d", [&opts](const std::vector<std::string>& v) {
            opts.d = std::stod(v[0]);
            return true;
        }, "first-integral constant");
        sub->add_option("--m", [&opts](const std::vector<std::string>& v) {
            opts.m = std::stoi(v[0]);
            return true;
        }, "lobe count for closure search");
        sub->add_option("--n", [&opts](const std::vector<std::string>& v) {
            opts.n = std::stoi(v[0]);
            return true;
        }, "winding count for closure search");
        sub->add_option("--d-min", opts.d_min, "closure bracket lower end");
        sub->add_option("--d-max", opts.d_max, "closure bracket upper end");
        sub->add_option("--samples", opts.samples, "samples per curvature period");
        sub->add_option("--n-t", opts.n_t, "orbit-direction samples");
        sub->add_option("--tol-el", opts.tol_el, "");
        sub->add_option("--tol-first-integral", opts.tol_first_integral, "");
        sub->add_option("--tol-closure", opts.tol_closure, "");
        sub->add_option("--tol-vertical", opts.tol_vertical, "");
        sub->add_option("--tol-weingarten", opts.tol_weingarten, "");
        sub->add_option("--tol-recover", opts.tol_recover, "");
        sub->add_option("--out", opts.out_dir, "output directory");
    };

    CLI::App* s_profile = app.add_subcommand("profile", "build a profile, check criticality");
    CLI::App* s_close = app.add_subcommand("close", "search d for a closed gamma_{m,n}");
    CLI::App* s_lift = app.add_subcommand("lift", "Hopf lift and vertical torus report");
    CLI::App* s_evolve = app.add_subcommand("evolve", "binormal evolution torus report");
    CLI::App* s_recover = app.add_subcommand("recover", "energy recovery round trip");
    CLI::App* s_verify = app.add_subcommand("verify", "full acceptance suite");
    CLI::App* s_figure1 = app.add_subcommand("figure1", "gamma_{3,2} preset artifacts");
    for (CLI::App* sub : {s_profile, s_close, s_lift, s_evolve, s_recover, s_verify, s_figure1})
        add_common(sub);

    // two-pass parse: config file first (lowest priority), then flags
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 2;
    }

    try {
        if (!config_path.empty()) {
            Options from_file;
            if (const char* env = std::getenv("CT_OUT_DIR")) from_file.out_dir = env;
            apply_config(from_file, read_config(config_path));
            // flags already parsed into opts win; take file values for
            // anything still at its default
            const Options defaults;
            auto pick = [](auto& flag_val, const auto& file_val, const auto& def_val) {
                if (flag_val == def_val) flag_val = file_val;
            };
            pick(opts.energy, from_file.energy, defaults.energy);
            pick(opts.lambda, from_file.lambda, defaults.lambda);
            pick(opts.q, from_file.q, defaults.q);
            pick(opts.epsilon, from_file.epsilon, defaults.epsilon);
            pick(opts.rho, from_file.rho, defaults.rho);
            if (!opts.d) opts.d = from_file.d;
            if (!opts.m) opts.m = from_file.m;
            if (!opts.n) opts.n = from_file.n;
            pick(opts.d_min, from_file.d_min, defaults.d_min);
            pick(opts.d_max, from_file.d_max, defaults.d_max);
            pick(opts.samples, from_file.samples, defaults.samples);
            pick(opts.n_t, from_file.n_t, defaults.n_t);
            pick(opts.tol_el, from_file.tol_el, defaults.tol_el);
            pick(opts.tol_first_integral, from_file.tol_first_integral,
                 defaults.tol_first_integral);
            pick(opts.tol_closure, from_file.tol_closure, defaults.tol_closure);
            pick(opts.tol_vertical, from_file.tol_vertical, defaults.tol_vertical);
            pick(opts.tol_weingarten, from_file.tol_weingarten, defaults.tol_weingarten);
            pick(opts.tol_recover, from_file.tol_recover, defaults.tol_recover);
            if (opts.out_dir == defaults.out_dir && !std::getenv("CT_OUT_DIR"))
                opts.out_dir = from_file.out_dir;
        }

        if (s_profile->parsed()) return cmd_profile(opts);
        if (s_close->parsed()) return cmd_close(opts);
        if (s_lift->parsed()) return cmd_lift(opts);
        if (s_evolve->parsed()) return cmd_evolve(opts);
        if (s_recover->parsed()) return cmd_recover(opts);
        if (s_verify->parsed()) return cmd_verify(opts);
        if (s_figure1->parsed()) return cmd_figure1(opts);
    } catch (const ct::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
