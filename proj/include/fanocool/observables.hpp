#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <tuple>
#include <utility>

#include <Eigen/Dense>

#include "fanocool/dynamics.hpp"
#include "fanocool/errors.hpp"
#include "fanocool/feedback.hpp"
#include "fanocool/params.hpp"
#include "fanocool/solvers.hpp"

namespace fanocool {

/// Everything the pipeline knows about one parameter point.  The
/// covariance-derived fields are absent when the drift is unstable (the
/// steady state does not exist there); modes and stability are always
/// populated.
struct CoolingReport {
    std::optional<double> n_fin;
    std::optional<double> var_x;
    std::optional<double> var_p;
    std::optional<double> equipartition_dev;  ///< |var_x−var_p|/(var_x+var_p)
    StabilityVerdict stability;
    NormalModes modes;
    std::optional<double> physicality_min_eig;  ///< min eig of V+(i/2)σ
    bool ground_state = false;                  ///< stable ∧ n_fin<1
};

/// Final phonon number n_fin = ½(⟨δx²⟩+⟨δp²⟩−1) from a covariance matrix.
inline double final_phonon(const Eigen::MatrixXd& V,
                           std::pair<int, int> mech_indices) {
    return 0.5 * (V(mech_indices.first, mech_indices.first) +
                  V(mech_indices.second, mech_indices.second) - 1.0);
}

/// Smallest eigenvalue of the Hermitian matrix V + (i/2)σ, where σ is
/// the symplectic form with 2×2 blocks [[0,1],[−1,0]] in quadrature
/// order.  Values ≥ −1e-10 certify a physical Gaussian state.
inline double physicality(const Eigen::MatrixXd& V) {
    const Eigen::Index n = V.rows();
    if (V.cols() != n || n % 2 != 0)
        throw SpecError("physicality: V must be square with even size");
    Eigen::MatrixXcd H = V.cast<std::complex<double>>();
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        H(k, k + 1) += std::complex<double>(0, 0.5);
        H(k + 1, k) += std::complex<double>(0, -0.5);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success)
        throw ConvergenceFailure("physicality: Hermitian eigensolve failed");
    return es.eigenvalues().minCoeff();
}

/// Drift/diffusion pair and optical modes of one parameter point, in
/// Omega_m = 1 units; `unit` restores the caller's frequency unit.
struct AssembledSystem {
    DriftDiffusion dd;
    NormalModes modes;
    double unit = 1;
};

/// Validation → pump resolution → nondimensionalization → effective
/// parameters → steady state → drift/diffusion assembly.  If a
/// PumpSpec is given it overrides p.eps_p via the power-to-amplitude
/// conversion (routed through the loop for the double-sided scheme).
inline AssembledSystem assemble_system(
    PhysicalParams p, FeedbackConfig fb,
    const std::optional<PumpSpec>& pump = std::nullopt) {
    std::tie(p, fb) = validate(std::move(p), std::move(fb));

    if (pump) {
        if (fb.scheme == Scheme::DoubleSided) {
            p.eps_p = effective_double(p, fb, *pump).eps_p_eff_mag;
        } else {
            p.eps_p = pump_amplitude(*pump, p);
        }
    }

    AssembledSystem as;
    as.unit = p.Omega_m;
    const PhysicalParams nd = nondimensionalize(p);

    if (fb.scheme == Scheme::DoubleSided) {
        const EffectiveDouble e = effective_double(nd, fb);
        const SteadyState ss = steady_state_double(nd, e);
        as.dd = assemble_double(nd, e, ss);
        as.modes = normal_modes_double_fano(nd, fb);
    } else {
        FeedbackConfig loop = fb;
        if (fb.scheme == Scheme::None) {
            // The bare system is the exact eta = 0 limit of the
            // single-sided assembly; force the loop out of the model.
            loop.r_cbs = 0;
            loop.t_cbs = 1;
            loop.phi = 0;
            loop.eta = 0;
        }
        const EffectiveSingle e = effective_single(nd, loop);
        const SteadyState ss = steady_state_single(nd, e);
        as.dd = assemble_single(nd, e, ss);
        as.modes = normal_modes(e.Delta_a_eff, e.Delta_f_eff, e.kappa_a_eff,
                                e.kappa_f_eff, e.G_eff);
    }
    return as;
}

/// End-to-end cooling pipeline: assemble_system → stability → (if
/// stable) Lyapunov solve → observables.  Frequencies in the returned
/// modes and max_real_eigenvalue are in the same units as the input.
inline CoolingReport cool(PhysicalParams p, FeedbackConfig fb,
                          const std::optional<PumpSpec>& pump = std::nullopt) {
    const AssembledSystem as = assemble_system(std::move(p), std::move(fb), pump);

    CoolingReport rep;
    rep.modes = as.modes;
    rep.stability = stability(as.dd.M);

    if (rep.stability.stable) {
        const Eigen::MatrixXd V = solve_lyapunov(as.dd.M, as.dd.N);
        const double vx = V(as.dd.mech_indices.first, as.dd.mech_indices.first);
        const double vp = V(as.dd.mech_indices.second, as.dd.mech_indices.second);
        rep.var_x = vx;
        rep.var_p = vp;
        rep.n_fin = 0.5 * (vx + vp - 1.0);
        rep.equipartition_dev = std::abs(vx - vp) / (vx + vp);
        rep.physicality_min_eig = physicality(V);
        rep.ground_state = *rep.n_fin < 1.0;
    }

    rep.modes.omega_plus *= as.unit;
    rep.modes.omega_minus *= as.unit;
    rep.modes.kappa_plus *= as.unit;
    rep.modes.kappa_minus *= as.unit;
    rep.stability.max_real_eigenvalue *= as.unit;
    return rep;
}

} // namespace fanocool
