#pragma once

#include <cmath>
#include <complex>

#include "fanocool/errors.hpp"
#include "fanocool/params.hpp"

namespace fanocool {

using complexd = std::complex<double>;

/// Loop-dressed parameters of the double-sided scheme, where the cavity
/// couples to the feedback loop through both mirrors.
struct EffectiveDouble {
    double Delta_eff = 0;      ///< effective detuning [rad/s]
    double kappa_tot_eff = 0;  ///< effective total decay [rad/s]
    double eps_p_eff_mag = 0;  ///< magnitude of the effective pump amplitude [rad/s]
};

/// Loop-dressed parameters of the single-sided scheme (cavity + Fano mode).
struct EffectiveSingle {
    double Delta_a_eff = 0;  ///< effective cavity detuning [rad/s]
    double Delta_f_eff = 0;  ///< effective Fano detuning [rad/s]
    double kappa_a_eff = 0;  ///< effective cavity decay [rad/s]
    double kappa_f_eff = 0;  ///< effective Fano decay [rad/s]
    complexd G_eff{0, 0};    ///< effective cavity-Fano coupling [rad/s]
    double eta = 0;          ///< derived loop efficiency t²r²η_ex
    double W1 = 0, W2 = 0, W3 = 0, W4 = 0;  ///< noise weights (dimensionless)
};

/// Semiclassical steady state and the resulting enhanced couplings.
struct SteadyState {
    complexd a_bar{0, 0};  ///< cavity amplitude
    complexd f_bar{0, 0};  ///< Fano amplitude
    complexd g_a{0, 0};    ///< g_a0 * a_bar [rad/s]
    complexd g_f{0, 0};    ///< g_f0 * f_bar [rad/s]
};

/// Double-sided effective parameters with the pump amplitude taken
/// directly from p.eps_p (already the effective amplitude).
inline EffectiveDouble effective_double(const PhysicalParams& p,
                                        const FeedbackConfig& fb) {
    const double se = std::sqrt(fb.eta);
    EffectiveDouble e;
    e.kappa_tot_eff = p.kappa_tot() - 2.0 * p.kappa_12() * se * std::cos(fb.phi);
    e.Delta_eff = p.Delta_a - 2.0 * p.kappa_12() * se * std::sin(fb.phi);
    e.eps_p_eff_mag = p.eps_p;
    return e;
}

/// Double-sided effective parameters with the pump routed through the
/// loop: the amplitudes entering via the two mirrors interfere, giving
/// |eps_p_eff| = |sqrt(2κ_1) − sqrt(2κ_2 η) e^{iφ}| · sqrt(P/ħω_p).
inline EffectiveDouble effective_double(const PhysicalParams& p,
                                        const FeedbackConfig& fb,
                                        const PumpSpec& pump) {
    EffectiveDouble e = effective_double(p, fb);
    const complexd route =
        std::sqrt(2.0 * p.kappa_1) -
        std::sqrt(2.0 * p.kappa_2 * fb.eta) * std::polar(1.0, fb.phi);
    e.eps_p_eff_mag = std::abs(route) * std::sqrt(pump.power / (hbar * pump.omega_p));
    return e;
}

/// Single-sided effective parameters.  eta is derived here from the CBS
/// coefficients; zeta scales the dissipative part of G_eff (including
/// its feedback correction), so zeta=0 leaves a purely coherent lambda.
inline EffectiveSingle effective_single(const PhysicalParams& p,
                                        const FeedbackConfig& fb) {
    EffectiveSingle e;
    const double r = fb.r_cbs, t = fb.t_cbs;
    e.eta = t * t * r * r * fb.eta_ex;
    const double se = std::sqrt(e.eta);
    const double c = std::cos(fb.phi), s = std::sin(fb.phi);

    e.Delta_a_eff = p.Delta_a - 2.0 * p.kappa_1 * se * s;
    e.Delta_f_eff = p.Delta_f - 2.0 * p.kappa_f * se * s;
    e.kappa_a_eff = p.kappa_1 * (1.0 - 2.0 * se * c) + p.kappa_2;
    e.kappa_f_eff = p.kappa_f * (1.0 - 2.0 * se * c);
    e.G_eff = p.lambda -
              complexd(0, 1) * p.zeta * p.kappa_1f() *
                  (1.0 - 2.0 * se * std::polar(1.0, fb.phi));

    e.W1 = r * (1.0 - se * c);
    e.W2 = r * se * s;
    e.W3 = t * (1.0 - se * c);
    e.W4 = t * se * s;
    return e;
}

/// Steady state of the coupled cavity-Fano pair under a pump of real
/// amplitude p.eps_p applied at the right mirror:
///   χ_a,eff⁻¹ ā + iG_eff f̄ = ε_p,   iG_eff ā + χ_f,eff⁻¹ f̄ = 0,
/// with χ⁻¹ = iΔ_eff + κ_eff.
inline SteadyState steady_state_single(const PhysicalParams& p,
                                       const EffectiveSingle& e) {
    const complexd chia_inv(e.kappa_a_eff, e.Delta_a_eff);
    const complexd chif_inv(e.kappa_f_eff, e.Delta_f_eff);
    const complexd D = chia_inv * chif_inv + e.G_eff * e.G_eff;
    if (std::abs(D) < 1e-12) throw SingularSteadyState(std::abs(D));
    SteadyState ss;
    ss.a_bar = chif_inv * p.eps_p / D;
    ss.f_bar = -complexd(0, 1) * e.G_eff * p.eps_p / D;
    ss.g_a = p.g_a0 * ss.a_bar;
    ss.g_f = p.g_f0 * ss.f_bar;
    return ss;
}

/// Steady state of the double-sided scheme.  The pump phase is tuned so
/// that a_bar is real and nonnegative: a_bar = |eps_p_eff/(iΔ_eff+κ_te)|.
inline SteadyState steady_state_double(const PhysicalParams& p,
                                       const EffectiveDouble& e) {
    const complexd denom(e.kappa_tot_eff, e.Delta_eff);
    if (std::abs(denom) < 1e-12) throw SingularSteadyState(std::abs(denom));
    SteadyState ss;
    ss.a_bar = std::abs(e.eps_p_eff_mag / denom);
    ss.f_bar = 0.0;
    ss.g_a = p.g_a0 * ss.a_bar;
    ss.g_f = 0.0;
    return ss;
}

} // namespace fanocool
