#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fanocool/errors.hpp"
#include "fanocool/observables.hpp"
#include "fanocool/params.hpp"
#include "fanocool/sweep.hpp"
#include "fanocool/version.hpp"

namespace fanocool {

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Everything a config file describes: the base parameter point, an
/// optional power-defined pump, and optional sweep axes.
struct LoadedConfig {
    PhysicalParams physical;
    FeedbackConfig feedback;
    std::optional<PumpSpec> pump;
    std::vector<SweepAxis> axes;
};

/// Rate-like fields are written in config files as ordinary frequencies
/// nu [Hz] and converted to angular frequencies on load; everything
/// else (efficiencies, phases, occupations, powers) is taken verbatim.
inline bool is_rate_path(const std::string& path) {
    static const char* rates[] = {
        "physical.Omega_m", "physical.gamma_m", "physical.kappa_1",
        "physical.kappa_2", "physical.kappa_f", "physical.lambda",
        "physical.Delta_a", "physical.Delta_f", "physical.g_a0",
        "physical.g_f0",    "physical.eps_p",   "pump.omega_p"};
    for (const char* r : rates)
        if (path == r) return true;
    return false;
}

inline std::string scheme_to_string(Scheme s) {
    switch (s) {
        case Scheme::None: return "None";
        case Scheme::DoubleSided: return "DoubleSided";
        case Scheme::SingleSided: return "SingleSided";
    }
    return "None";
}

inline Scheme scheme_from_string(const std::string& s) {
    if (s == "None") return Scheme::None;
    if (s == "DoubleSided") return Scheme::DoubleSided;
    if (s == "SingleSided") return Scheme::SingleSided;
    throw ConfigError("unknown scheme '" + s +
                      "' (expected None, DoubleSided or SingleSided)");
}

inline std::string method_to_string(StabilityMethod m) {
    switch (m) {
        case StabilityMethod::RouthHurwitz: return "RouthHurwitz";
        case StabilityMethod::Eigenvalue: return "Eigenvalue";
        case StabilityMethod::Both: return "Both";
    }
    return "Eigenvalue";
}

namespace detail {

inline double num(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number())
        throw ConfigError("'" + where + "' must be a number");
    return j.get<double>();
}

/// Visit every key of an object, rejecting unknown ones.
template <typename Fn>
inline void walk_object(const nlohmann::json& j, const std::string& section,
                        Fn&& handle) {
    if (!j.is_object())
        throw ConfigError("section '" + section + "' must be an object");
    for (const auto& [key, value] : j.items()) {
        if (!handle(key, value))
            throw ConfigError("unknown key '" + section + "." + key + "'");
    }
}

inline SweepAxis parse_axis(const nlohmann::json& j) {
    SweepAxis ax;
    bool saw_param = false;
    walk_object(j, "sweep.axes[]", [&](const std::string& k, const nlohmann::json& v) {
        if (k == "param") { ax.param_path = v.get<std::string>(); saw_param = true; return true; }
        if (k == "min") { ax.min = num(v, "min"); return true; }
        if (k == "max") { ax.max = num(v, "max"); return true; }
        if (k == "points") { ax.points = v.get<int>(); return true; }
        if (k == "scale") {
            const std::string s = v.get<std::string>();
            if (s == "linear") ax.scale = SweepAxis::Scale::Linear;
            else if (s == "log") ax.scale = SweepAxis::Scale::Log;
            else throw ConfigError("axis scale must be 'linear' or 'log'");
            return true;
        }
        return false;
    });
    if (!saw_param) throw ConfigError("sweep axis needs a 'param' path");
    if (is_rate_path(ax.param_path)) {
        ax.min *= two_pi;
        ax.max *= two_pi;
    }
    return ax;
}

} // namespace detail

/// Parse an in-memory JSON config.  Unknown keys are rejected;
/// physical.Omega_m is required; rate fields are converted Hz → rad/s.
inline LoadedConfig parse_config(const nlohmann::json& root) {
    LoadedConfig cfg;
    bool saw_Omega_m = false;
    bool saw_eps_p = false;

    if (!root.is_object()) throw ConfigError("config root must be an object");
    for (const auto& [section, body] : root.items()) {
        if (section == "physical") {
            detail::walk_object(body, "physical", [&](const std::string& k, const nlohmann::json& v) {
                PhysicalParams& p = cfg.physical;
                auto rate = [&](double& field) { field = detail::num(v, k) * two_pi; };
                if (k == "Omega_m") { rate(p.Omega_m); saw_Omega_m = true; return true; }
                if (k == "gamma_m") { rate(p.gamma_m); return true; }
                if (k == "kappa_1") { rate(p.kappa_1); return true; }
                if (k == "kappa_2") { rate(p.kappa_2); return true; }
                if (k == "kappa_f") { rate(p.kappa_f); return true; }
                if (k == "lambda") { rate(p.lambda); return true; }
                if (k == "Delta_a") { rate(p.Delta_a); return true; }
                if (k == "Delta_f") { rate(p.Delta_f); return true; }
                if (k == "g_a0") { rate(p.g_a0); return true; }
                if (k == "g_f0") { rate(p.g_f0); return true; }
                if (k == "eps_p") { rate(p.eps_p); saw_eps_p = true; return true; }
                if (k == "n_m") { p.n_m = detail::num(v, k); return true; }
                if (k == "zeta") { p.zeta = detail::num(v, k); return true; }
                return false;
            });
        } else if (section == "feedback") {
            detail::walk_object(body, "feedback", [&](const std::string& k, const nlohmann::json& v) {
                FeedbackConfig& fb = cfg.feedback;
                if (k == "scheme") { fb.scheme = scheme_from_string(v.get<std::string>()); return true; }
                if (k == "phi") { fb.phi = detail::num(v, k); return true; }
                if (k == "eta") { fb.eta = detail::num(v, k); return true; }
                if (k == "r_cbs") { fb.r_cbs = detail::num(v, k); return true; }
                if (k == "eta_ex") { fb.eta_ex = detail::num(v, k); return true; }
                return false;
            });
        } else if (section == "pump") {
            PumpSpec ps;
            detail::walk_object(body, "pump", [&](const std::string& k, const nlohmann::json& v) {
                if (k == "power") { ps.power = detail::num(v, k); return true; }
                if (k == "omega_p") { ps.omega_p = detail::num(v, k) * two_pi; return true; }
                if (k == "theta") { ps.theta = detail::num(v, k); return true; }
                if (k == "side") {
                    const std::string s = v.get<std::string>();
                    if (s == "LeftMirror") ps.side = PumpSide::LeftMirror;
                    else if (s == "RightMirror") ps.side = PumpSide::RightMirror;
                    else throw ConfigError("pump.side must be LeftMirror or RightMirror");
                    return true;
                }
                return false;
            });
            cfg.pump = ps;
        } else if (section == "sweep") {
            detail::walk_object(body, "sweep", [&](const std::string& k, const nlohmann::json& v) {
                if (k == "axes") {
                    if (!v.is_array()) throw ConfigError("sweep.axes must be an array");
                    for (const auto& a : v) cfg.axes.push_back(detail::parse_axis(a));
                    return true;
                }
                return false;
            });
        } else {
            throw ConfigError("unknown section '" + section + "'");
        }
    }

    if (!saw_Omega_m) throw ConfigError("physical.Omega_m is required");
    if (saw_eps_p && cfg.pump)
        throw ConfigError("specify either physical.eps_p or a pump section, not both");
    return cfg;
}

/// Load and parse a JSON config file.
inline LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("parse error in '" + path + "': " + e.what());
    }
    try {
        return parse_config(root);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid config '" + path + "': " + e.what());
    }
}

/// Apply one `path=value` override, using the same units as the config
/// file (rate fields in Hz).  feedback.scheme accepts its string form.
inline void apply_override(LoadedConfig& cfg, const std::string& assignment) {
    const size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + assignment + "' is not of the form path=value");
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);

    if (path == "feedback.scheme") {
        cfg.feedback.scheme = scheme_from_string(value);
        return;
    }
    double v;
    try {
        size_t pos = 0;
        v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
        throw ConfigError("override '" + assignment + "': value is not a number");
    }
    if (is_rate_path(path)) v *= two_pi;
    *resolve_param(cfg.physical, cfg.feedback, cfg.pump, path) = v;
}

// ---------------------------------------------------------------- output

inline nlohmann::json to_json(const NormalModes& m) {
    return {{"omega_plus", {m.omega_plus.real(), m.omega_plus.imag()}},
            {"omega_minus", {m.omega_minus.real(), m.omega_minus.imag()}},
            {"kappa_plus", m.kappa_plus},
            {"kappa_minus", m.kappa_minus},
            {"narrow_index", m.narrow_index}};
}

inline nlohmann::json to_json(const StabilityVerdict& v) {
    return {{"stable", v.stable},
            {"max_real_eigenvalue", v.max_real_eigenvalue},
            {"method", method_to_string(v.method)},
            {"marginal", v.marginal}};
}

namespace detail {

inline nlohmann::json opt_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

} // namespace detail

inline nlohmann::json to_json(const CoolingReport& r) {
    return {{"n_fin", detail::opt_json(r.n_fin)},
            {"var_x", detail::opt_json(r.var_x)},
            {"var_p", detail::opt_json(r.var_p)},
            {"equipartition_dev", detail::opt_json(r.equipartition_dev)},
            {"stability", to_json(r.stability)},
            {"modes", to_json(r.modes)},
            {"physicality_min_eig", detail::opt_json(r.physicality_min_eig)},
            {"ground_state", r.ground_state}};
}

inline nlohmann::json to_json(const PhysicalParams& p) {
    return {{"Omega_m", p.Omega_m}, {"gamma_m", p.gamma_m},
            {"kappa_1", p.kappa_1}, {"kappa_2", p.kappa_2},
            {"kappa_f", p.kappa_f}, {"lambda", p.lambda},
            {"Delta_a", p.Delta_a}, {"Delta_f", p.Delta_f},
            {"g_a0", p.g_a0},       {"g_f0", p.g_f0},
            {"n_m", p.n_m},         {"eps_p", p.eps_p},
            {"zeta", p.zeta},       {"units", "rad/s"}};
}

inline nlohmann::json to_json(const FeedbackConfig& fb) {
    return {{"scheme", scheme_to_string(fb.scheme)}, {"phi", fb.phi},
            {"eta", fb.eta},       {"r_cbs", fb.r_cbs},
            {"t_cbs", fb.t_cbs},   {"eta_ex", fb.eta_ex}};
}

inline nlohmann::json to_json(const PumpSpec& ps) {
    return {{"power", ps.power},
            {"omega_p", ps.omega_p},
            {"side", ps.side == PumpSide::LeftMirror ? "LeftMirror" : "RightMirror"},
            {"theta", ps.theta}};
}

inline nlohmann::json to_json(const SweepTable& t) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& ax : t.spec.axes)
        axes.push_back({{"param", ax.param_path},
                        {"min", ax.min},
                        {"max", ax.max},
                        {"points", ax.points},
                        {"scale", ax.scale == SweepAxis::Scale::Log ? "log" : "linear"}});
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : t.cells) {
        if (c.report) {
            cells.push_back(to_json(*c.report));
        } else {
            cells.push_back({{"error", c.error}});
        }
    }
    nlohmann::json provenance = {{"physical", to_json(t.spec.base_physical)},
                                 {"feedback", to_json(t.spec.base_feedback)}};
    if (t.spec.pump) provenance["pump"] = to_json(*t.spec.pump);
    return {{"version", t.version},
            {"provenance", provenance},
            {"axes", axes},
            {"axis1_values", t.axis1_values},
            {"axis2_values", t.axis2_values},
            {"cells", cells}};
}

} // namespace fanocool
