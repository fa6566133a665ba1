#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fanocool/errors.hpp"
#include "fanocool/feedback.hpp"
#include "fanocool/params.hpp"

namespace fanocool {

/// Drift/diffusion pair of the linearized quadrature dynamics
/// dR/dt = M R + noise, with <noise noiseᵀ>_sym folded into N via
/// dV/dt = MV + VMᵀ + N.
struct DriftDiffusion {
    Eigen::MatrixXd M;  ///< real drift matrix [rad/s entries]
    Eigen::MatrixXd N;  ///< real symmetric diffusion matrix
    std::vector<std::string> quadrature_order;  ///< row/column labels
    std::pair<int, int> mech_indices{0, 1};     ///< indices of (δx, δp)
};

/// Complex eigen-energies of the two optical normal modes.
struct NormalModes {
    complexd omega_plus{0, 0};   ///< ω̃_+ (principal-branch + root)
    complexd omega_minus{0, 0};  ///< ω̃_−
    double kappa_plus = 0;       ///< −Im ω̃_+
    double kappa_minus = 0;      ///< −Im ω̃_−
    int narrow_index = 0;        ///< 0 if + has the smaller linewidth, else 1

    complexd narrow() const { return narrow_index == 0 ? omega_plus : omega_minus; }
    complexd broad() const { return narrow_index == 0 ? omega_minus : omega_plus; }
    double kappa_narrow() const { return narrow_index == 0 ? kappa_plus : kappa_minus; }
    double kappa_broad() const { return narrow_index == 0 ? kappa_minus : kappa_plus; }
};

namespace detail {

/// Shared closed form for the normal modes; the coupling enters only
/// through its square, which the double-Fano variant replaces by G·G′.
inline NormalModes modes_from_G2(double Delta_a, double Delta_f,
                                 double kappa_a, double kappa_f,
                                 complexd G_squared) {
    const complexd ctr(0.5 * (Delta_a + Delta_f), -0.5 * (kappa_a + kappa_f));
    const complexd half_diff(0.5 * (Delta_a - Delta_f), -0.5 * (kappa_a - kappa_f));
    const complexd rad = std::sqrt(half_diff * half_diff + G_squared);
    NormalModes nm;
    nm.omega_plus = ctr + rad;
    nm.omega_minus = ctr - rad;
    nm.kappa_plus = -nm.omega_plus.imag();
    nm.kappa_minus = -nm.omega_minus.imag();
    nm.narrow_index = (nm.kappa_plus <= nm.kappa_minus) ? 0 : 1;
    return nm;
}

} // namespace detail

/// Normal modes of the coupled (cavity, Fano) pair:
/// ω̃_± = (Δ_a+Δ_f)/2 − i(κ_a+κ_f)/2 ± sqrt(((Δ_a−Δ_f)/2 − i(κ_a−κ_f)/2)² + G²).
inline NormalModes normal_modes(double Delta_a, double Delta_f,
                                double kappa_a, double kappa_f, complexd G) {
    return detail::modes_from_G2(Delta_a, Delta_f, kappa_a, kappa_f, G * G);
}

/// Normal modes of the cavity with two Fano mirrors under double-sided
/// feedback: the loop dresses the two couplings asymmetrically, so G²
/// becomes G·G′ with G′ = G + 2i·ζ·κ_2f·√η·e^{iφ}, while Δ_a and κ_tot
/// take their loop-dressed values and the Fano mode keeps its bare ones.
inline NormalModes normal_modes_double_fano(const PhysicalParams& p,
                                            const FeedbackConfig& fb) {
    const double se = std::sqrt(fb.eta);
    const double Da_eff = p.Delta_a - 2.0 * p.kappa_12() * se * std::sin(fb.phi);
    const double kte = p.kappa_tot() - 2.0 * p.kappa_12() * se * std::cos(fb.phi);
    const complexd G = p.lambda - complexd(0, 1) * p.zeta * p.kappa_1f();
    const complexd Gp =
        G + complexd(0, 2) * p.zeta * p.kappa_2f() * se * std::polar(1.0, fb.phi);
    return detail::modes_from_G2(Da_eff, p.Delta_f, kte, p.kappa_f, G * Gp);
}

/// 4×4 drift matrix of the double-sided scheme over (δX_a, δP_a, δx, δp);
/// g_a is real by the pump-phase convention.
inline Eigen::MatrixXd drift_double(const PhysicalParams& p,
                                    const EffectiveDouble& e, double g_a) {
    const double s2g = std::sqrt(2.0) * g_a;
    Eigen::MatrixXd M(4, 4);
    M << e.kappa_tot_eff, -e.Delta_eff, 0, 0,
         e.Delta_eff, e.kappa_tot_eff, s2g, 0,
         0, 0, 0, -p.Omega_m,
         s2g, 0, p.Omega_m, p.gamma_m;
    return -M;
}

/// 4×4 diffusion matrix of the double-sided scheme.
inline Eigen::MatrixXd diffusion_double(const EffectiveDouble& e,
                                        const PhysicalParams& p) {
    if (e.kappa_tot_eff < 0)
        throw NegativeDiffusion(
            "kappa_tot_eff = " + std::to_string(e.kappa_tot_eff) +
            " < 0: noise model invalid at this (eta, phi)");
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(4, 4);
    N(0, 0) = N(1, 1) = e.kappa_tot_eff;
    N(3, 3) = p.gamma_m * (2.0 * p.n_m + 1.0);
    return N;
}

/// 6×6 drift matrix of the single-sided scheme over
/// (δX_a, δP_a, δX_f, δP_f, δx, δp).
inline Eigen::MatrixXd drift_single(const PhysicalParams& p,
                                    const EffectiveSingle& e,
                                    const SteadyState& ss) {
    const double s2 = std::sqrt(2.0);
    const double Gr = e.G_eff.real(), Gi = e.G_eff.imag();
    const double gar = ss.g_a.real(), gai = ss.g_a.imag();
    const double gfr = ss.g_f.real(), gfi = ss.g_f.imag();
    Eigen::MatrixXd M(6, 6);
    M << e.kappa_a_eff, -e.Delta_a_eff, -Gi, -Gr, -s2 * gai, 0,
         e.Delta_a_eff, e.kappa_a_eff, Gr, -Gi, s2 * gar, 0,
         -Gi, -Gr, e.kappa_f_eff, -e.Delta_f_eff, -s2 * gfi, 0,
         Gr, -Gi, e.Delta_f_eff, e.kappa_f_eff, s2 * gfr, 0,
         0, 0, 0, 0, 0, -p.Omega_m,
         s2 * gar, s2 * gai, s2 * gfr, s2 * gfi, p.Omega_m, p.gamma_m;
    return -M;
}

/// 6×6 diffusion matrix of the single-sided scheme.  The optical noise
/// entering both modes traverses the loop, weighting the shared
/// reservoir by ΣW²; the cross entries encode the common origin of the
/// cavity and Fano baths.
inline Eigen::MatrixXd diffusion_single(const PhysicalParams& p,
                                        const EffectiveSingle& e) {
    const double SW = e.W1 * e.W1 + e.W2 * e.W2 + e.W3 * e.W3 + e.W4 * e.W4;
    const double F1 = SW * p.kappa_1 + p.kappa_2;
    const double F2 = SW * p.kappa_1f();
    const double F3 = SW * p.kappa_f;
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(6, 6);
    N(0, 0) = N(1, 1) = F1;
    N(2, 2) = N(3, 3) = F3;
    N(0, 2) = N(2, 0) = N(1, 3) = N(3, 1) = F2;
    N(5, 5) = p.gamma_m * (2.0 * p.n_m + 1.0);
    return N;
}

/// Bundle drift+diffusion for the double-sided scheme.
inline DriftDiffusion assemble_double(const PhysicalParams& p,
                                      const EffectiveDouble& e,
                                      const SteadyState& ss) {
    DriftDiffusion dd;
    dd.M = drift_double(p, e, ss.g_a.real());
    dd.N = diffusion_double(e, p);
    dd.quadrature_order = {"dX_a", "dP_a", "dx", "dp"};
    dd.mech_indices = {2, 3};
    return dd;
}

/// Bundle drift+diffusion for the single-sided (or bare) scheme.
inline DriftDiffusion assemble_single(const PhysicalParams& p,
                                      const EffectiveSingle& e,
                                      const SteadyState& ss) {
    DriftDiffusion dd;
    dd.M = drift_single(p, e, ss);
    dd.N = diffusion_single(p, e);
    dd.quadrature_order = {"dX_a", "dP_a", "dX_f", "dP_f", "dx", "dp"};
    dd.mech_indices = {4, 5};
    return dd;
}

} // namespace fanocool
