#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "fanocool/errors.hpp"

namespace fanocool {

/// Reduced Planck constant [J s].
inline constexpr double hbar = 1.054571817e-34;

/// Feedback topology selector.
enum class Scheme { None, DoubleSided, SingleSided };

/// Which mirror the pump drives.
enum class PumpSide { LeftMirror, RightMirror };

/// All physical rates and frequencies of the Fano-mirror cavity model.
///
/// Every rate-like field is an angular frequency [rad/s] unless noted.
/// Detunings Delta_a, Delta_f are understood to already include the
/// static radiation-pressure shifts; no self-consistent displacement
/// solve is performed.
struct PhysicalParams {
    double Omega_m = 0;  ///< mechanical angular frequency
    double gamma_m = 0;  ///< mechanical damping rate
    double kappa_1 = 0;  ///< left (Fano-mirror) cavity decay rate
    double kappa_2 = 0;  ///< right-mirror cavity decay rate
    double kappa_f = 0;  ///< Fano (guided) mode decay rate
    double lambda = 0;   ///< coherent cavity-Fano coupling
    double Delta_a = 0;  ///< cavity detuning (incl. static shift)
    double Delta_f = 0;  ///< Fano detuning (incl. static shift)
    double g_a0 = 0;     ///< single-photon cavity optomechanical coupling
    double g_f0 = 0;     ///< single-photon Fano optomechanical coupling (may be <= 0)
    double n_m = 0;      ///< thermal phonon occupation (dimensionless)
    double eps_p = 0;    ///< pump amplitude (nonnegative real)
    double zeta = 1;     ///< dissipative-coupling scale factor (dimensionless)

    /// Unit of angular frequency the rate fields are expressed in,
    /// as a multiple of rad/s.  1 means plain rad/s; after
    /// nondimensionalize() it holds the original Omega_m so outputs can
    /// be re-dimensionalized exactly.
    double omega_scale = 1;

    // Derived quantities -- recomputed on demand, never stored.
    double kappa_tot() const { return kappa_1 + kappa_2; }
    double kappa_1f() const { return std::sqrt(kappa_1 * kappa_f); }
    double kappa_12() const { return std::sqrt(kappa_1 * kappa_2); }
    /// Cross-rate between the right-mirror and guided-mode reservoirs.
    /// The shared continuum is rank-1, so the geometric mean is the only
    /// form consistent with kappa_1f.
    double kappa_2f() const { return std::sqrt(kappa_2 * kappa_f); }
    double delta_Delta() const { return Delta_a - Delta_f; }
};

/// Coherent-feedback loop configuration.
struct FeedbackConfig {
    Scheme scheme = Scheme::None;
    double phi = 0;     ///< accumulated loop phase [rad]
    double eta = 0;     ///< loop efficiency; user-set for DoubleSided only
    double r_cbs = 0;   ///< CBS reflection coefficient
    double t_cbs = 1;   ///< CBS transmission coefficient (derived from r_cbs)
    double eta_ex = 1;  ///< extra-loss efficiency factor
};

/// Pump defined through optical power rather than amplitude.
struct PumpSpec {
    double power = 0;                        ///< pump power [W]
    double omega_p = 0;                      ///< pump angular frequency [rad/s]
    PumpSide side = PumpSide::RightMirror;   ///< driven mirror
    double theta = 0;                        ///< pump phase [rad]
};

/// Validate the parameter pair against every invariant; derived fields
/// (t_cbs, and eta for the single-sided scheme) are populated.  All
/// violations are aggregated into a single InvalidParameter.
inline std::pair<PhysicalParams, FeedbackConfig>
validate(PhysicalParams p, FeedbackConfig fb) {
    std::vector<ParameterViolation> bad;
    auto require = [&](bool ok, const char* name, double v, const char* c) {
        if (!ok) bad.push_back({name, v, c});
    };

    require(p.Omega_m > 0, "Omega_m", p.Omega_m, "> 0");
    require(p.gamma_m >= 0, "gamma_m", p.gamma_m, ">= 0");
    require(p.kappa_1 >= 0, "kappa_1", p.kappa_1, ">= 0");
    require(p.kappa_2 >= 0, "kappa_2", p.kappa_2, ">= 0");
    require(p.kappa_f >= 0, "kappa_f", p.kappa_f, ">= 0");
    require(p.n_m >= 0, "n_m", p.n_m, ">= 0");
    require(p.eps_p >= 0, "eps_p", p.eps_p, ">= 0");
    require(p.zeta >= 0 && p.zeta <= 1, "zeta", p.zeta, "in [0,1]");
    require(p.omega_scale > 0, "omega_scale", p.omega_scale, "> 0");

    require(fb.eta_ex >= 0 && fb.eta_ex <= 1, "eta_ex", fb.eta_ex, "in [0,1]");
    require(fb.r_cbs >= 0 && fb.r_cbs <= 1, "r_cbs", fb.r_cbs, "in [0,1]");
    if (fb.r_cbs >= 0 && fb.r_cbs <= 1)
        fb.t_cbs = std::sqrt(1.0 - fb.r_cbs * fb.r_cbs);

    if (fb.scheme == Scheme::SingleSided) {
        // eta is derived, never user-set, for this scheme.
        fb.eta = fb.t_cbs * fb.t_cbs * fb.r_cbs * fb.r_cbs * fb.eta_ex;
    }
    require(fb.eta >= 0 && fb.eta < 1, "eta", fb.eta, "in [0,1)");

    if (!bad.empty()) throw InvalidParameter(std::move(bad));
    return {p, fb};
}

/// Rescale every rate/frequency field by 1/Omega_m so the mechanical
/// frequency becomes exactly 1.  The original unit is retained in
/// omega_scale, making redimensionalize() an exact inverse.
inline PhysicalParams nondimensionalize(const PhysicalParams& p) {
    if (!(p.Omega_m > 0))
        throw InvalidParameter("Omega_m", p.Omega_m, "> 0");
    PhysicalParams q = p;
    const double s = p.Omega_m;
    q.Omega_m = 1.0;
    q.gamma_m = p.gamma_m / s;
    q.kappa_1 = p.kappa_1 / s;
    q.kappa_2 = p.kappa_2 / s;
    q.kappa_f = p.kappa_f / s;
    q.lambda = p.lambda / s;
    q.Delta_a = p.Delta_a / s;
    q.Delta_f = p.Delta_f / s;
    q.g_a0 = p.g_a0 / s;
    q.g_f0 = p.g_f0 / s;
    q.eps_p = p.eps_p / s;
    q.omega_scale = p.omega_scale * s;
    return q;
}

/// Exact inverse of nondimensionalize(): multiply every rate field by
/// omega_scale and reset the unit to rad/s.
inline PhysicalParams redimensionalize(const PhysicalParams& p) {
    PhysicalParams q = p;
    const double s = p.omega_scale;
    q.Omega_m = p.Omega_m * s;
    q.gamma_m = p.gamma_m * s;
    q.kappa_1 = p.kappa_1 * s;
    q.kappa_2 = p.kappa_2 * s;
    q.kappa_f = p.kappa_f * s;
    q.lambda = p.lambda * s;
    q.Delta_a = p.Delta_a * s;
    q.Delta_f = p.Delta_f * s;
    q.g_a0 = p.g_a0 * s;
    q.g_f0 = p.g_f0 * s;
    q.eps_p = p.eps_p * s;
    q.omega_scale = 1.0;
    return q;
}

/// Pump amplitude from power: eps_p = sqrt(2 kappa_side P / (hbar omega_p)).
/// kappa_side is kappa_1 or kappa_2 according to the driven mirror.
/// The PhysicalParams must be in plain rad/s units (omega_scale == 1).
inline double pump_amplitude(const PumpSpec& ps, const PhysicalParams& p) {
    const double kappa_side = (ps.side == PumpSide::LeftMirror) ? p.kappa_1 : p.kappa_2;
    return std::sqrt(2.0 * kappa_side * ps.power / (hbar * ps.omega_p));
}

} // namespace fanocool
