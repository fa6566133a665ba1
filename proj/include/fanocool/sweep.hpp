#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "fanocool/errors.hpp"
#include "fanocool/observables.hpp"
#include "fanocool/params.hpp"
#include "fanocool/version.hpp"

namespace fanocool {

/// One sweep dimension over a dotted parameter path.
struct SweepAxis {
    enum class Scale { Linear, Log };
    std::string param_path;  ///< e.g. "feedback.r_cbs", "physical.Delta_f"
    double min = 0;
    double max = 0;
    int points = 2;
    Scale scale = Scale::Linear;
};

/// Full description of a sweep: base parameter point plus 1 or 2 axes.
struct SweepSpec {
    PhysicalParams base_physical;
    FeedbackConfig base_feedback;
    std::optional<PumpSpec> pump;
    std::vector<SweepAxis> axes;
    /// Reserved for column selection; the writers currently always emit
    /// the fixed column set, so this list is carried but not consulted.
    std::vector<std::string> outputs;
};

/// One evaluated grid cell: either a report or an error message.
struct SweepCell {
    std::optional<CoolingReport> report;
    std::string error;  ///< nonempty iff the cell failed
};

/// Row-major grid of results (axis 1 outer, axis 2 inner).
struct SweepTable {
    SweepSpec spec;  ///< provenance: resolved base config and axes
    std::string version = fanocool::version;
    std::vector<double> axis1_values;
    std::vector<double> axis2_values;  ///< empty for 1D sweeps
    std::vector<SweepCell> cells;

    size_t index_of(size_t i1, size_t i2) const {
        return axis2_values.empty() ? i1 : i1 * axis2_values.size() + i2;
    }
};

/// Resolve a dotted parameter path to a mutable numeric field.
inline double* resolve_param(PhysicalParams& p, FeedbackConfig& fb,
                             std::optional<PumpSpec>& pump,
                             const std::string& path) {
    if (path == "physical.Omega_m") return &p.Omega_m;
    if (path == "physical.gamma_m") return &p.gamma_m;
    if (path == "physical.kappa_1") return &p.kappa_1;
    if (path == "physical.kappa_2") return &p.kappa_2;
    if (path == "physical.kappa_f") return &p.kappa_f;
    if (path == "physical.lambda") return &p.lambda;
    if (path == "physical.Delta_a") return &p.Delta_a;
    if (path == "physical.Delta_f") return &p.Delta_f;
    if (path == "physical.g_a0") return &p.g_a0;
    if (path == "physical.g_f0") return &p.g_f0;
    if (path == "physical.n_m") return &p.n_m;
    if (path == "physical.eps_p") return &p.eps_p;
    if (path == "physical.zeta") return &p.zeta;
    if (path == "feedback.phi") return &fb.phi;
    if (path == "feedback.eta") return &fb.eta;
    if (path == "feedback.r_cbs") return &fb.r_cbs;
    if (path == "feedback.eta_ex") return &fb.eta_ex;
    if (path == "feedback.t_cbs")
        throw SpecError("feedback.t_cbs is derived from r_cbs and cannot be set");
    if (path.rfind("pump.", 0) == 0) {
        if (!pump) throw SpecError("parameter path '" + path +
                                   "' requires a pump section");
        if (path == "pump.power") return &pump->power;
        if (path == "pump.omega_p") return &pump->omega_p;
        if (path == "pump.theta") return &pump->theta;
    }
    throw SpecError("unknown parameter path: " + path);
}

/// Axis grid with inclusive endpoints.
inline std::vector<double> axis_values(const SweepAxis& ax) {
    std::vector<double> v(static_cast<size_t>(ax.points));
    for (int k = 0; k < ax.points; ++k) {
        const double f = static_cast<double>(k) / (ax.points - 1);
        v[static_cast<size_t>(k)] =
            ax.scale == SweepAxis::Scale::Log
                ? std::exp(std::log(ax.min) + f * (std::log(ax.max) - std::log(ax.min)))
                : ax.min + f * (ax.max - ax.min);
    }
    v.front() = ax.min;
    v.back() = ax.max;
    return v;
}

inline void validate_spec(const SweepSpec& spec) {
    if (spec.axes.empty() || spec.axes.size() > 2)
        throw SpecError("sweep needs 1 or 2 axes");
    for (const auto& ax : spec.axes) {
        if (ax.points < 2)
            throw SpecError("axis '" + ax.param_path + "': points must be >= 2");
        if (!(ax.min < ax.max))
            throw SpecError("axis '" + ax.param_path + "': need min < max");
        if (ax.scale == SweepAxis::Scale::Log && !(ax.min > 0))
            throw SpecError("axis '" + ax.param_path + "': log scale needs min > 0");
        PhysicalParams p = spec.base_physical;
        FeedbackConfig fb = spec.base_feedback;
        std::optional<PumpSpec> pump = spec.pump;
        resolve_param(p, fb, pump, ax.param_path);  // throws if unknown
    }
}

namespace detail {

inline unsigned sweep_thread_count(size_t n_cells) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("FANO_COOL_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = static_cast<unsigned>(v);
    }
    return static_cast<unsigned>(std::min<size_t>(n, std::max<size_t>(n_cells, 1)));
}

} // namespace detail

/// Evaluate cool(...) on every grid point.  Cells are independent; a
/// pool of workers claims cells through an atomic counter and writes
/// results by index, so the table is deterministic for any worker
/// count.  Per-cell failures are recorded in the cell, never thrown.
/// n_threads = 0 means automatic (FANO_COOL_THREADS or hardware).
inline SweepTable run_sweep(const SweepSpec& spec, unsigned n_threads = 0) {
    validate_spec(spec);

    SweepTable table;
    table.spec = spec;
    table.axis1_values = axis_values(spec.axes[0]);
    if (spec.axes.size() == 2) table.axis2_values = axis_values(spec.axes[1]);

    const size_t n1 = table.axis1_values.size();
    const size_t n2 = std::max<size_t>(table.axis2_values.size(), 1);
    const size_t n_cells = n1 * n2;
    table.cells.resize(n_cells);

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t idx = next.fetch_add(1); idx < n_cells; idx = next.fetch_add(1)) {
            PhysicalParams p = spec.base_physical;
            FeedbackConfig fb = spec.base_feedback;
            std::optional<PumpSpec> pump = spec.pump;
            *resolve_param(p, fb, pump, spec.axes[0].param_path) =
                table.axis1_values[idx / n2];
            if (spec.axes.size() == 2)
                *resolve_param(p, fb, pump, spec.axes[1].param_path) =
                    table.axis2_values[idx % n2];
            try {
                table.cells[idx].report = cool(p, fb, pump);
            } catch (const std::exception& e) {
                table.cells[idx].error = e.what();
            }
        }
    };

    const unsigned nt = n_threads ? n_threads : detail::sweep_thread_count(n_cells);
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (unsigned i = 0; i < nt; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return table;
}

/// Project a named field out of a report; absent for unstable cells
/// when the field is covariance-derived.
inline std::optional<double> report_field(const CoolingReport& r,
                                          const std::string& field) {
    if (field == "n_fin") return r.n_fin;
    if (field == "var_x") return r.var_x;
    if (field == "var_p") return r.var_p;
    if (field == "equip_dev" || field == "equipartition_dev")
        return r.equipartition_dev;
    if (field == "physicality_min_eig") return r.physicality_min_eig;
    if (field == "omega_minus") return r.modes.narrow().real();
    if (field == "kappa_minus") return r.modes.kappa_narrow();
    if (field == "max_real_eigenvalue") return r.stability.max_real_eigenvalue;
    throw SpecError("unknown report field: " + field);
}

/// Location and value of a sweep minimum.
struct MinimumResult {
    size_t index = 0;                ///< row-major grid index
    double axis1 = 0;                ///< axis-1 value at the minimum
    std::optional<double> axis2;     ///< axis-2 value (2D sweeps)
    double value = 0;
};

/// Global minimum of `field` over all cells carrying it; ties broken by
/// the lowest grid index.  Throws AllUnstable when no cell has a value.
inline MinimumResult find_minimum(const SweepTable& table,
                                  const std::string& field) {
    std::optional<MinimumResult> best;
    const size_t n2 = std::max<size_t>(table.axis2_values.size(), 1);
    for (size_t idx = 0; idx < table.cells.size(); ++idx) {
        const auto& cell = table.cells[idx];
        if (!cell.report) continue;
        const std::optional<double> v = report_field(*cell.report, field);
        if (!v) continue;
        if (!best || *v < best->value) {
            MinimumResult m;
            m.index = idx;
            m.axis1 = table.axis1_values[idx / n2];
            if (!table.axis2_values.empty())
                m.axis2 = table.axis2_values[idx % n2];
            m.value = *v;
            best = m;
        }
    }
    if (!best) throw AllUnstable();
    return *best;
}

namespace detail {

inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string csv_opt(const std::optional<double>& v) {
    return v ? csv_num(*v) : std::string();
}

} // namespace detail

/// Write the fixed-column CSV form of a sweep table.  Absent values
/// (unstable or errored cells) are empty fields; for 1D sweeps the
/// axis2 column is empty.
inline void write_csv(const SweepTable& table, std::ostream& os) {
    os << "# fano-cool v" << table.version << "\n";
    os << "axis1,axis2,n_fin,var_x,var_p,equip_dev,omega_minus,kappa_minus,stable\n";
    const size_t n2 = std::max<size_t>(table.axis2_values.size(), 1);
    for (size_t idx = 0; idx < table.cells.size(); ++idx) {
        os << detail::csv_num(table.axis1_values[idx / n2]) << ',';
        if (!table.axis2_values.empty())
            os << detail::csv_num(table.axis2_values[idx % n2]);
        os << ',';
        const auto& cell = table.cells[idx];
        if (cell.report) {
            const CoolingReport& r = *cell.report;
            os << detail::csv_opt(r.n_fin) << ','
               << detail::csv_opt(r.var_x) << ','
               << detail::csv_opt(r.var_p) << ','
               << detail::csv_opt(r.equipartition_dev) << ','
               << detail::csv_num(r.modes.narrow().real()) << ','
               << detail::csv_num(r.modes.kappa_narrow()) << ','
               << (r.stability.stable ? '1' : '0');
        } else {
            os << ",,,,,,";  // errored cell: all data fields absent
        }
        os << '\n';
    }
}

} // namespace fanocool
