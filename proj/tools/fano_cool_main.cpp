// fano-cool: ground-state cooling of a mechanical mode in a Fano-mirror
// optomechanical cavity with coherent feedback.
//
// Verbs: report, modes, sweep, stability, selfcheck.
// Exit codes: 0 success, 1 validation/config error, 2 solver error,
//             3 all-unstable sweep.

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <fanocool/fanocool.hpp>

namespace {

using namespace fanocool;

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> sets;
    std::string output_path;  // empty = stdout
    std::string format;       // "csv" | "json"
};

void add_common(CLI::App* cmd, CommonOpts& o, const std::string& default_format) {
    cmd->add_option("--config", o.config_path, "JSON config file")->required();
    cmd->add_option("--set", o.sets,
                    "Override 'path=value' (repeatable), config units");
    cmd->add_option("-o,--output", o.output_path, "Output file (default: stdout)");
    o.format = default_format;
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

LoadedConfig load_with_overrides(const CommonOpts& o) {
    LoadedConfig cfg = load_config(o.config_path);
    for (const auto& s : o.sets) apply_override(cfg, s);
    return cfg;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << text;
}

std::string report_csv(const CoolingReport& r) {
    std::ostringstream os;
    os << "# fano-cool v" << version << "\n"
       << "n_fin,var_x,var_p,equip_dev,omega_minus,kappa_minus,stable\n"
       << detail::csv_opt(r.n_fin) << ',' << detail::csv_opt(r.var_x) << ','
       << detail::csv_opt(r.var_p) << ',' << detail::csv_opt(r.equipartition_dev)
       << ',' << detail::csv_num(r.modes.narrow().real()) << ','
       << detail::csv_num(r.modes.kappa_narrow()) << ','
       << (r.stability.stable ? '1' : '0') << '\n';
    return os.str();
}

int cmd_report(const CommonOpts& o) {
    const LoadedConfig cfg = load_with_overrides(o);
    const CoolingReport rep = cool(cfg.physical, cfg.feedback, cfg.pump);
    if (o.format == "csv")
        write_text(o.output_path, report_csv(rep));
    else
        write_text(o.output_path, to_json(rep).dump(2));
    return 0;
}

int cmd_modes(const CommonOpts& o) {
    const LoadedConfig cfg = load_with_overrides(o);
    const AssembledSystem as = assemble_system(cfg.physical, cfg.feedback, cfg.pump);
    NormalModes m = as.modes;
    m.omega_plus *= as.unit;
    m.omega_minus *= as.unit;
    m.kappa_plus *= as.unit;
    m.kappa_minus *= as.unit;
    if (o.format == "csv") {
        std::ostringstream os;
        os << "# fano-cool v" << version << "\n"
           << "omega_plus_re,omega_plus_im,omega_minus_re,omega_minus_im,"
              "kappa_plus,kappa_minus,narrow_index\n"
           << detail::csv_num(m.omega_plus.real()) << ','
           << detail::csv_num(m.omega_plus.imag()) << ','
           << detail::csv_num(m.omega_minus.real()) << ','
           << detail::csv_num(m.omega_minus.imag()) << ','
           << detail::csv_num(m.kappa_plus) << ','
           << detail::csv_num(m.kappa_minus) << ',' << m.narrow_index << '\n';
        write_text(o.output_path, os.str());
    } else {
        nlohmann::json j = to_json(m);
        j["Omega_m"] = cfg.physical.Omega_m;
        j["narrow_omega_over_Omega_m"] =
            m.narrow().real() / cfg.physical.Omega_m;
        j["narrow_kappa_over_Omega_m"] =
            m.kappa_narrow() / cfg.physical.Omega_m;
        write_text(o.output_path, j.dump(2));
    }
    return 0;
}

int cmd_stability(const CommonOpts& o) {
    const LoadedConfig cfg = load_with_overrides(o);
    const AssembledSystem as = assemble_system(cfg.physical, cfg.feedback, cfg.pump);
    StabilityVerdict eig = stability(as.dd.M);
    StabilityVerdict rh = routh_hurwitz(characteristic_polynomial(as.dd.M));
    eig.max_real_eigenvalue *= as.unit;
    rh.max_real_eigenvalue *= as.unit;
    nlohmann::json j = {{"eigenvalue", to_json(eig)},
                        {"routh_hurwitz", to_json(rh)},
                        {"agreement", eig.stable == rh.stable}};
    write_text(o.output_path, j.dump(2));
    return 0;
}

int cmd_sweep(const CommonOpts& o, const std::string& plot_path) {
    const LoadedConfig cfg = load_with_overrides(o);
    if (cfg.axes.empty())
        throw SpecError("config has no sweep.axes; nothing to sweep");

    SweepSpec spec;
    spec.base_physical = cfg.physical;
    spec.base_feedback = cfg.feedback;
    spec.pump = cfg.pump;
    spec.axes = cfg.axes;

    const SweepTable table = run_sweep(spec);

    if (o.format == "json") {
        write_text(o.output_path, to_json(table).dump(2));
    } else {
        std::ostringstream os;
        write_csv(table, os);
        write_text(o.output_path, os.str());
    }

    if (!plot_path.empty()) {
        const std::string csv_ref =
            o.output_path.empty() ? "sweep.csv" : o.output_path;
        write_text(plot_path, emit_plot_script(table, csv_ref));
    }

    // Exit 3 when no cell produced a steady state.
    const MinimumResult m = find_minimum(table, "n_fin");  // throws AllUnstable
    std::cerr << "minimum n_fin = " << m.value << " at "
              << spec.axes[0].param_path << " = " << m.axis1;
    if (m.axis2)
        std::cerr << ", " << spec.axes[1].param_path << " = " << *m.axis2;
    std::cerr << "\n";
    return 0;
}

// ------------------------------------------------------------- selfcheck

int g_checks = 0, g_failures = 0;

void check(bool ok, const std::string& what) {
    ++g_checks;
    if (!ok) {
        ++g_failures;
        std::cerr << "selfcheck FAIL: " << what << "\n";
    }
}

void check_close(double a, double b, double tol, const std::string& what) {
    check(std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)}),
          what + " (got " + std::to_string(a) + ", want " + std::to_string(b) + ")");
}

int cmd_selfcheck() {
    using std::abs;
    const std::complex<double> I(0, 1);

    // normal_modes: decoupled limit G=0.
    {
        const NormalModes m = normal_modes(2.0, -1.0, 0.3, 5.0, 0.0);
        const bool match_a = abs(m.omega_plus - (2.0 - 0.3 * I)) < 1e-14 ||
                             abs(m.omega_minus - (2.0 - 0.3 * I)) < 1e-14;
        const bool match_f = abs(m.omega_plus - (-1.0 - 5.0 * I)) < 1e-14 ||
                             abs(m.omega_minus - (-1.0 - 5.0 * I)) < 1e-14;
        check(match_a && match_f, "normal_modes G=0 decoupled spectrum");
    }
    // normal_modes: degenerate real-G splitting.
    {
        const NormalModes m = normal_modes(1.5, 1.5, 0.2, 0.2, 0.7);
        check(abs(m.omega_plus - (2.2 - 0.2 * I)) < 1e-14 &&
              abs(m.omega_minus - (0.8 - 0.2 * I)) < 1e-14,
              "normal_modes degenerate splitting");
    }
    // solve_lyapunov: scalar decoupled case.
    {
        const double g = 0.7;
        Eigen::MatrixXd M = -g * Eigen::MatrixXd::Identity(4, 4);
        Eigen::VectorXd nd(4);
        nd << 1.0, 2.0, 3.0, 4.0;
        const Eigen::MatrixXd V = solve_lyapunov(M, nd.asDiagonal());
        check((V - Eigen::MatrixXd(nd.asDiagonal()) / (2 * g)).norm() < 1e-12,
              "solve_lyapunov scalar case");
    }
    // integrate_covariance: M=0 gives V0 + N t exactly.
    {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2, 2);
        Eigen::MatrixXd N(2, 2);
        N << 0.5, 0.1, 0.1, 0.3;
        Eigen::MatrixXd V0 = Eigen::MatrixXd::Identity(2, 2);
        const Eigen::MatrixXd V = integrate_covariance(M, N, V0, 2.0, 0.01);
        check((V - (V0 + 2.0 * N)).norm() < 1e-12, "integrate_covariance M=0");
    }
    // final_phonon: vacuum and thermal states.
    {
        Eigen::MatrixXd V = 0.5 * Eigen::MatrixXd::Identity(4, 4);
        check_close(final_phonon(V, {2, 3}), 0.0, 1e-15, "final_phonon vacuum");
        V(2, 2) = V(3, 3) = 7.25;  // n_m + 1/2 with n_m = 6.75
        check_close(final_phonon(V, {2, 3}), 6.75, 1e-15, "final_phonon thermal");
    }
    // physicality: vacuum saturates, V=I has margin 1/2.
    {
        check_close(physicality(0.5 * Eigen::MatrixXd::Identity(6, 6)), 0.0,
                    1e-12, "physicality vacuum");
        check_close(physicality(Eigen::MatrixXd::Identity(6, 6)), 0.5, 1e-12,
                    "physicality V=I");
    }
    // effective_double: no-feedback reduction and closed-form value.
    {
        PhysicalParams p;
        p.Omega_m = 1;
        p.kappa_1 = p.kappa_2 = 2.5;
        p.Delta_a = 1.0;
        FeedbackConfig fb;
        fb.scheme = Scheme::DoubleSided;
        fb.eta = 0;
        EffectiveDouble e = effective_double(p, fb);
        check_close(e.kappa_tot_eff, 5.0, 1e-15, "effective_double eta=0 kappa");
        check_close(e.Delta_eff, 1.0, 1e-15, "effective_double eta=0 Delta");
        fb.eta = 0.81;
        e = effective_double(p, fb);
        check_close(e.kappa_tot_eff, 0.2 * 2.5, 1e-12,
                    "effective_double eta=0.81 kappa");
    }
    // effective_single: efficiency composition and phi=pi linewidth.
    {
        PhysicalParams p;
        p.Omega_m = 1;
        p.kappa_1 = 10;
        p.kappa_2 = 0.5;
        p.kappa_f = 2;
        p.lambda = 3;
        FeedbackConfig fb;
        fb.scheme = Scheme::SingleSided;
        fb.r_cbs = fb.t_cbs = std::sqrt(0.5);
        fb.eta_ex = 0.9;
        EffectiveSingle e = effective_single(p, fb);
        check_close(e.eta, 0.225, 1e-15, "effective_single eta=t^2 r^2 eta_ex");
        fb.phi = 3.14159265358979323846;
        e = effective_single(p, fb);
        check_close(e.kappa_f_eff, 2.0 * (1 + 2 * std::sqrt(0.225)), 1e-12,
                    "effective_single phi=pi kappa_f_eff");
        fb.eta_ex = 0;
        e = effective_single(p, fb);
        check(e.kappa_a_eff == 10.5 && e.kappa_f_eff == 2.0 &&
              abs(e.G_eff - (3.0 - I * std::sqrt(20.0))) < 1e-12,
              "effective_single eta_ex=0 bare reduction");
    }
    // routh_hurwitz on known quadratics.
    {
        check(routh_hurwitz(std::vector<double>{1, 3, 2}).stable,
              "routh s^2+3s+2 stable");
        check(!routh_hurwitz(std::vector<double>{1, 0, -1}).stable,
              "routh s^2-1 unstable");
    }
    // steady states: trivial limits.
    {
        PhysicalParams p;
        p.Omega_m = 1;
        p.g_a0 = 0.1;
        p.eps_p = 0;
        EffectiveSingle e;
        e.kappa_a_eff = 1;
        e.kappa_f_eff = 1;
        e.G_eff = 0.5;
        SteadyState ss = steady_state_single(p, e);
        check(abs(ss.a_bar) == 0 && abs(ss.f_bar) == 0, "steady_state eps_p=0");
        p.eps_p = 2.0;
        e.G_eff = 0;
        e.Delta_a_eff = 3.0;
        ss = steady_state_single(p, e);
        check(abs(ss.a_bar - 2.0 / (I * 3.0 + 1.0)) < 1e-15 && abs(ss.f_bar) == 0,
              "steady_state G=0 decoupled");
        EffectiveDouble ed;
        ed.Delta_eff = 0;
        ed.kappa_tot_eff = 4.0;
        ed.eps_p_eff_mag = 2.0;
        check_close(steady_state_double(p, ed).a_bar.real(), 0.5, 1e-15,
                    "steady_state_double Delta_eff=0");
    }
    // diffusion matrices: sparsity and reductions.
    {
        PhysicalParams p;
        p.Omega_m = 1;
        p.kappa_1 = 4;
        p.kappa_2 = 0.3;
        p.kappa_f = 9;
        p.gamma_m = 0.01;
        p.n_m = 10;
        FeedbackConfig fb;
        fb.scheme = Scheme::SingleSided;
        fb.r_cbs = 0.6;
        fb.t_cbs = 0.8;
        fb.eta_ex = 0;  // eta = 0
        const EffectiveSingle e = effective_single(p, fb);
        const Eigen::MatrixXd N = diffusion_single(p, e);
        check_close(N(0, 0), 4.3, 1e-12, "diffusion_single eta=0 F1");
        check_close(N(0, 2), 6.0, 1e-12, "diffusion_single eta=0 F2");
        check_close(N(2, 2), 9.0, 1e-12, "diffusion_single eta=0 F3");
        check(N(4, 4) == 0.0, "diffusion_single N[5][5]=0");
        check_close(N(5, 5), 0.01 * 21, 1e-12, "diffusion_single mech noise");
    }
    // drift matrices: mechanical rotation entries.
    {
        PhysicalParams p;
        p.Omega_m = 2.5;
        p.gamma_m = 0.1;
        EffectiveDouble ed;
        ed.kappa_tot_eff = 1;
        ed.Delta_eff = 1;
        const Eigen::MatrixXd M4 = drift_double(p, ed, 0.2);
        check(M4(2, 3) == 2.5 && M4(3, 2) == -2.5, "drift_double mech block");
        EffectiveSingle e;
        e.kappa_a_eff = 1;
        e.kappa_f_eff = 1;
        SteadyState ss;
        const Eigen::MatrixXd M6 = drift_single(p, e, ss);
        check(M6(4, 5) == 2.5 && M6(5, 4) == -2.5, "drift_single mech block");
    }
    // decoupled thermal limit through the full pipeline.
    {
        PhysicalParams p;
        p.Omega_m = 1.0;
        p.gamma_m = 1e-5;
        p.kappa_1 = 50;
        p.kappa_2 = 0.1;
        p.kappa_f = 2;
        p.lambda = 1;
        p.Delta_a = 30;
        p.Delta_f = 20;
        p.n_m = 100;
        p.eps_p = 10;
        FeedbackConfig fb;
        fb.scheme = Scheme::None;
        const CoolingReport rep = cool(p, fb);
        check(rep.n_fin.has_value(), "decoupled pipeline stable");
        if (rep.n_fin)
            check(abs(*rep.n_fin - 100.0) / 100.0 < 1e-3,
                  "decoupled pipeline n_fin ~= n_m");
    }

    std::cout << "selfcheck: " << (g_checks - g_failures) << "/" << g_checks
              << " checks passed\n";
    return g_failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fano-cool: Fano-mirror optomechanical cooling with coherent feedback"};
    app.set_version_flag("--version", std::string("fano-cool v") + fanocool::version);
    app.require_subcommand(1);

    CommonOpts report_opts, modes_opts, sweep_opts, stability_opts;
    std::string plot_path;

    CLI::App* report = app.add_subcommand("report", "Full cooling report at one parameter point");
    add_common(report, report_opts, "json");
    CLI::App* modes = app.add_subcommand("modes", "Optical normal-mode spectrum");
    add_common(modes, modes_opts, "json");
    CLI::App* sweep = app.add_subcommand("sweep", "Grid sweep over 1 or 2 parameters");
    add_common(sweep, sweep_opts, "csv");
    sweep->add_option("--plot-script", plot_path, "Also write a gnuplot script here");
    CLI::App* stab = app.add_subcommand("stability", "Stability verdicts (eigenvalue + Routh-Hurwitz)");
    add_common(stab, stability_opts, "json");
    app.add_subcommand("selfcheck", "Run embedded golden checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // help/version exit clean, parse errors = 1
    }

    try {
        if (report->parsed()) return cmd_report(report_opts);
        if (modes->parsed()) return cmd_modes(modes_opts);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, plot_path);
        if (stab->parsed()) return cmd_stability(stability_opts);
        return cmd_selfcheck();
    } catch (const fanocool::AllUnstable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const fanocool::InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const fanocool::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const fanocool::SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const fanocool::Error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    }
}
