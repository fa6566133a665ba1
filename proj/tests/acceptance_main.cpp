// Acceptance harness: one line per criterion, exit code = number of
// failed criteria.  Each criterion runs inside its own try/catch so a
// crash in one cannot mask the others.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fanocool/config.hpp"
#include "oracle_helpers.hpp"

using namespace fanocool;
using complexd = std::complex<double>;
using acc_clock = std::chrono::steady_clock;

namespace {

double seconds_since(acc_clock::time_point t0) {
    return std::chrono::duration<double>(acc_clock::now() - t0).count();
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    char buf[768];
    std::snprintf(buf, sizeof buf, f, args...);
    return std::string(buf);
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Membrane-in-the-middle point: double-sided loop around a moderate
// cavity (all rates within ~7 decades of the mechanical frequency).
PhysicalParams soft_point() {
    PhysicalParams p;
    p.Omega_m = 2 * M_PI * 0.13e6;
    p.gamma_m = 2 * M_PI * 0.12;
    p.kappa_1 = 2 * M_PI * 0.25e6;
    p.kappa_2 = 2 * M_PI * 0.25e6;
    p.g_a0 = 2 * M_PI * 50;
    p.eps_p = 2 * M_PI * 80e6;
    p.n_m = 9.6e4;
    p.Delta_a = p.Omega_m;
    return p;
}

// Fano-mirror cavity point: optical rates up to ~3e7 times the
// mechanical frequency (the stiff regime the solvers must survive).
PhysicalParams stiff_point() {
    PhysicalParams p;
    p.Omega_m = 2 * M_PI * 1.3e6;
    p.gamma_m = 2 * M_PI * 5e-3;
    p.kappa_1 = 2 * M_PI * 20e12;
    p.kappa_2 = 2 * M_PI * 0.6e9;
    p.kappa_f = 2 * M_PI * 1.08e9;
    p.lambda = 2 * M_PI * 7e9;
    p.Delta_a = 30 * p.Omega_m;
    p.Delta_f = 80 * p.Omega_m;
    p.g_a0 = 6.5e-5 * p.Omega_m;
    p.g_f0 = -1.6e-4 * p.Omega_m;
    p.eps_p = 2 * M_PI * 80e9;
    p.n_m = 1e5;
    return p;
}

FeedbackConfig double_fb(double eta, double phi) {
    FeedbackConfig fb;
    fb.scheme = Scheme::DoubleSided;
    fb.eta = eta;
    fb.phi = phi;
    return fb;
}

FeedbackConfig single_fb(double r, double eta_ex, double phi) {
    FeedbackConfig fb;
    fb.scheme = Scheme::SingleSided;
    fb.r_cbs = r;
    fb.eta_ex = eta_ex;
    fb.phi = phi;
    return fb;
}

// C1: double-sided efficiency sweep reaches the ground state in the
// expected eta window, fast enough for interactive use.
Outcome c1() {
    SweepSpec spec;
    spec.base_physical = soft_point();
    spec.base_feedback = double_fb(0.0, 0.0);
    SweepAxis ax;
    ax.param_path = "feedback.eta";
    ax.min = 0.0;
    ax.max = 0.99;
    ax.points = 500;
    spec.axes = {ax};

    const auto t0 = acc_clock::now();
    const SweepTable table = run_sweep(spec);
    const double secs = seconds_since(t0);
    const MinimumResult m = find_minimum(table, "n_fin");

    const bool value_ok = m.value >= 0.54 && m.value <= 0.64;
    const bool eta_ok = m.axis1 >= 0.89 && m.axis1 <= 0.95;
    const bool time_ok = secs < 5.0;
    return {value_ok && eta_ok && time_ok,
            fmt("min n_fin=%.6f (want [0.54,0.64]) at eta=%.4f (want "
                "[0.89,0.95]), 500 points in %.2f s (want <5)",
                m.value, m.axis1, secs)};
}

// C2: symmetric input/output coupling cools at least twice as well as
// either 10:1 asymmetry.
Outcome c2() {
    const double ratios[3] = {1.0, 0.1, 10.0};
    double n[3];
    for (int i = 0; i < 3; ++i) {
        PhysicalParams p = soft_point();
        p.kappa_2 = ratios[i] * p.kappa_1;
        const CoolingReport r = cool(p, double_fb(0.8, 0.0));
        if (!r.stability.stable || !r.n_fin)
            return {false, fmt("kappa_2/kappa_1=%g is unstable", ratios[i])};
        n[i] = *r.n_fin;
    }
    const bool ok = 2.0 * n[0] <= n[1] && 2.0 * n[0] <= n[2];
    return {ok, fmt("n_fin: ratio 1 -> %.4f, ratio 0.1 -> %.4f, ratio 10 "
                    "-> %.4f (want first <= half of the others)",
                    n[0], n[1], n[2])};
}

// C3: single-sided reflectivity scan finds a stable ground-state point;
// at the optimum the narrow mode sits near the mechanical sideband and
// the state is close to equipartition.
Outcome c3() {
    SweepSpec spec;
    spec.base_physical = stiff_point();
    spec.base_feedback = single_fb(0.7, 0.9, M_PI);
    SweepAxis ax;
    ax.param_path = "feedback.r_cbs";
    ax.min = 0.99 / 200.0;
    ax.max = 0.99;
    ax.points = 200;
    spec.axes = {ax};

    const auto t0 = acc_clock::now();
    const SweepTable table = run_sweep(spec);
    const double secs = seconds_since(t0);

    bool found = false;
    MinimumResult m;
    try {
        m = find_minimum(table, "n_fin");
        found = true;
    } catch (const AllUnstable&) {
    }
    if (!found)
        return {false, fmt("no stable cell in the 200-point scan (%.2f s)",
                           secs)};

    const CoolingReport& best = *table.cells[m.index].report;
    const double ratio =
        best.modes.narrow().real() / spec.base_physical.Omega_m;
    const double equip = best.equipartition_dev.value_or(1.0);

    const bool exists_ok = m.value < 1.0;
    const bool window_ok = ratio >= 0.9 && ratio <= 1.3;
    const bool equip_ok = equip < 0.1;
    const bool time_ok = secs < 30.0;
    return {exists_ok && window_ok && equip_ok && time_ok,
            fmt("min stable n_fin=%.6f at r_cbs=%.5f (want <1: %s); "
                "omega_-/Omega_m=%.4f (want [0.9,1.3]: %s); "
                "equip_dev=%.2e (want <0.1: %s); %.2f s (want <30: %s)",
                m.value, m.axis1, exists_ok ? "yes" : "NO", ratio,
                window_ok ? "yes" : "NO", equip, equip_ok ? "yes" : "NO",
                secs, time_ok ? "yes" : "NO")};
}

// C4: at r_cbs=0.7 the feedback phase orders the narrow linewidth as
// kappa_-(phi=pi) < kappa_-(eta=0) < kappa_-(phi=0).
Outcome c4() {
    const PhysicalParams p = stiff_point();
    auto kappa_minus = [&](double eta_ex, double phi) {
        const AssembledSystem as =
            assemble_system(p, single_fb(0.7, eta_ex, phi));
        return as.modes.kappa_narrow();  // in Omega_m units
    };
    const double k_pi = kappa_minus(0.9, M_PI);
    const double k_off = kappa_minus(0.0, M_PI);
    const double k_zero = kappa_minus(0.9, 0.0);
    const bool ok = k_pi < k_off && k_off < k_zero;
    return {ok, fmt("kappa_-/Omega_m: phi=pi -> %.4f, loop off -> %.4f, "
                    "phi=0 -> %.4f (want strictly increasing)",
                    k_pi, k_off, k_zero)};
}

// C5: with strongly asymmetric mirror decays the narrow hybrid mode is
// an order of magnitude less sensitive to the loop than the symmetric
// case, over a full (eta, phi) grid.
Outcome c5() {
    PhysicalParams p;
    const double Om = 2 * M_PI * 1.3e6;
    p.Omega_m = 1.0;
    p.kappa_1 = 2 * M_PI * 20e12 / Om;
    p.kappa_f = 2 * M_PI * 1.08e9 / Om;
    p.lambda = 2 * M_PI * 805e6 / Om;
    p.Delta_a = 30.0;
    p.Delta_f = 11.8;

    auto max_rel_shift = [&](double k2_over_k1) {
        p.kappa_2 = k2_over_k1 * p.kappa_1;
        const double base =
            normal_modes_double_fano(p, double_fb(0.0, 0.0)).kappa_narrow();
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double eta = 0.99 * i / 99.0;
            for (int j = 0; j < 64; ++j) {
                const double phi = 2 * M_PI * j / 64.0;
                const double k =
                    normal_modes_double_fano(p, double_fb(eta, phi))
                        .kappa_narrow();
                worst = std::max(worst, std::abs(k - base) / base);
            }
        }
        return worst;
    };

    const double asym = max_rel_shift(3e-5);
    const double sym = max_rel_shift(1.0);
    const bool ok = asym <= 0.1 * sym;
    return {ok, fmt("max relative kappa_- shift over 100x64 grid: "
                    "asym=%.4f, sym=%.2f (want asym <= 0.1*sym = %.2f)",
                    asym, sym, 0.1 * sym)};
}

// C6: on 100 random stable systems with eigenvalue-spread up to 1e3,
// the Lyapunov solver agrees with long-time RK4 integration and with a
// dense Kronecker solve.
Outcome c6() {
    std::mt19937_64 rng(900913);
    double worst_rk4 = 0.0, worst_kron = 0.0;
    int count = 0;
    for (const int n : {4, 6}) {
        for (int k = 0; k < 50; ++k) {
            const double ratio = std::exp(
                std::log(3.0) + (std::log(1e3) - std::log(3.0)) * k / 49.0);
            const Eigen::MatrixXd M = oracle::random_stable(n, ratio, rng);
            const Eigen::MatrixXd N = oracle::random_psd(n, rng);
            const Eigen::MatrixXd V = solve_lyapunov(M, N);

            const double t_final = 40.0 / std::abs(max_real_eigenvalue(M));
            const double dt = 0.09 / M.norm();
            const Eigen::MatrixXd Vrk = integrate_covariance(
                M, N, Eigen::MatrixXd::Zero(n, n), t_final, dt);
            const Eigen::MatrixXd Vkr = oracle::lyapunov_kronecker(M, N);

            worst_rk4 = std::max(worst_rk4, oracle::rel_frobenius(Vrk, V));
            worst_kron = std::max(worst_kron, oracle::rel_frobenius(Vkr, V));
            ++count;
        }
    }
    const bool ok = count == 100 && worst_rk4 < 1e-6 && worst_kron < 1e-8;
    return {ok, fmt("%d pairs: max rel diff vs RK4 = %.2e (want <1e-6), "
                    "vs dense solve = %.2e (want <1e-8)",
                    count, worst_rk4, worst_kron)};
}

// C7: the Routh-Hurwitz verdict matches the eigenvalue verdict on 1000
// random degree-4/6 systems away from the marginal band.
Outcome c7() {
    std::mt19937_64 rng(700001);
    std::normal_distribution<double> gauss(0.0, 1.0);
    int checked = 0, disagreements = 0;
    for (int attempt = 0; checked < 1000 && attempt < 1200; ++attempt) {
        const int n = (attempt % 2 == 0) ? 4 : 6;
        Eigen::MatrixXd M(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M(i, j) = gauss(rng);
        const StabilityVerdict ev = stability(M);
        if (std::abs(ev.max_real_eigenvalue) <= 1e-9 * M.norm()) continue;
        const StabilityVerdict rh = routh_hurwitz(M);
        ++checked;
        if (rh.stable != ev.stable) ++disagreements;
    }
    const bool ok = checked >= 1000 && disagreements == 0;
    return {ok, fmt("%d cases compared, %d disagreements (want 1000, 0)",
                    checked, disagreements)};
}

// C8: steady states of random stable parameter sets in both schemes
// satisfy the Heisenberg physicality bound.
Outcome c8() {
    std::mt19937_64 rng(808080);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double min_eig = 1e300;
    int counts[2] = {0, 0};

    for (int scheme = 0; scheme < 2; ++scheme) {
        for (int attempt = 0; counts[scheme] < 50 && attempt < 1500;
             ++attempt) {
            PhysicalParams p;
            p.Omega_m = 1.0;
            p.gamma_m = 1e-4 * std::pow(10.0, 2 * u(rng));
            p.n_m = std::pow(10.0, 4 * u(rng));
            FeedbackConfig fb;
            if (scheme == 0) {
                p.kappa_1 = 0.5 + 4.5 * u(rng);
                p.kappa_2 = 0.5 + 4.5 * u(rng);
                p.g_a0 = 1e-3 * std::pow(10.0, 2 * u(rng));
                p.eps_p = std::pow(10.0, 2 * u(rng));
                p.Delta_a = 0.3 + 1.7 * u(rng);
                fb = double_fb(0.9 * u(rng), 2 * M_PI * u(rng));
            } else {
                p.kappa_1 = std::pow(10.0, 3 * u(rng));
                p.kappa_2 = 0.1 + 4.9 * u(rng);
                p.kappa_f = 0.5 + 49.5 * u(rng);
                p.lambda = 0.1 + 19.9 * u(rng);
                p.g_a0 = 1e-4 * std::pow(10.0, 2 * u(rng));
                p.g_f0 = -1e-4 * std::pow(10.0, 2 * u(rng));
                p.eps_p = std::pow(10.0, 3 * u(rng));
                p.Delta_a = 0.5 + 59.5 * u(rng);
                p.Delta_f = 0.5 + 59.5 * u(rng);
                fb = single_fb(0.05 + 0.9 * u(rng), u(rng),
                               2 * M_PI * u(rng));
            }
            CoolingReport r;
            try {
                r = cool(p, fb);
            } catch (const Error&) {
                continue;
            }
            if (!r.stability.stable || !r.physicality_min_eig) continue;
            ++counts[scheme];
            min_eig = std::min(min_eig, *r.physicality_min_eig);
        }
    }
    const bool enough = counts[0] >= 50 && counts[1] >= 50;
    const bool ok = enough && min_eig >= -1e-10;
    return {ok, fmt("%d double-loop + %d single-loop stable sets, worst "
                    "min eig(V+(i/2)sigma) = %.2e (want >= -1e-10)",
                    counts[0], counts[1], min_eig)};
}

// C9: limiting cases.  (a) a dead loop reproduces the bare cavity
// field-by-field; (b) with the couplings off the mechanics thermalizes
// to the bath; (c) existence of a radiation-pressure-only ground-state
// point on the high-power detuning/reflectivity grid.
Outcome c9() {
    // (a) eta -> 0 equivalence
    const PhysicalParams p4 = stiff_point();
    const CoolingReport ra = cool(p4, single_fb(0.7, 0.0, M_PI));
    FeedbackConfig none;
    none.scheme = Scheme::None;
    const CoolingReport rb = cool(p4, none);
    auto close = [](double a, double b) {
        return std::abs(a - b) <=
               1e-12 * std::max({std::abs(a), std::abs(b), 1.0});
    };
    auto close_opt = [&](const std::optional<double>& a,
                         const std::optional<double>& b) {
        if (a.has_value() != b.has_value()) return false;
        return !a || close(*a, *b);
    };
    const bool ok_a =
        ra.stability.stable == rb.stability.stable &&
        close(ra.stability.max_real_eigenvalue,
              rb.stability.max_real_eigenvalue) &&
        close(ra.modes.omega_plus.real(), rb.modes.omega_plus.real()) &&
        close(ra.modes.omega_plus.imag(), rb.modes.omega_plus.imag()) &&
        close(ra.modes.omega_minus.real(), rb.modes.omega_minus.real()) &&
        close(ra.modes.omega_minus.imag(), rb.modes.omega_minus.imag()) &&
        close(ra.modes.kappa_plus, rb.modes.kappa_plus) &&
        close(ra.modes.kappa_minus, rb.modes.kappa_minus) &&
        close_opt(ra.n_fin, rb.n_fin) && close_opt(ra.var_x, rb.var_x) &&
        close_opt(ra.var_p, rb.var_p) &&
        close_opt(ra.equipartition_dev, rb.equipartition_dev) &&
        close_opt(ra.physicality_min_eig, rb.physicality_min_eig) &&
        ra.ground_state == rb.ground_state;

    // (b) decoupled mechanics thermalizes to n_m
    PhysicalParams pb = stiff_point();
    pb.g_a0 = 0.0;
    pb.g_f0 = 0.0;
    pb.gamma_m = 1e-5 * pb.Omega_m;
    const CoolingReport rc = cool(pb, single_fb(0.5, 0.64, M_PI));
    const bool ok_b = rc.stability.stable && rc.n_fin &&
                      std::abs(*rc.n_fin - pb.n_m) <= 1e-3 * pb.n_m;

    // (c) dispersive-only ground state on the (delta_Delta, r_cbs) grid
    PhysicalParams pc = stiff_point();
    pc.kappa_1 = 2 * M_PI * 30e12;
    pc.eps_p = 2 * M_PI * 238.7e12;
    pc.g_f0 = 0.0;
    double min_stable = 1e300;
    int stable_cells = 0;
    for (int i = 0; i < 46; ++i) {
        const double dd = -200.0 + 4.0 * i;  // Delta_a - Delta_f, Omega_m units
        for (int j = 0; j < 17; ++j) {
            const double r = 0.1 + 0.05 * j;
            PhysicalParams q = pc;
            q.Delta_f = (30.0 - dd) * pc.Omega_m;
            CoolingReport rep;
            try {
                rep = cool(q, single_fb(r, 0.9, M_PI));
            } catch (const Error&) {
                continue;
            }
            if (rep.stability.stable && rep.n_fin) {
                ++stable_cells;
                min_stable = std::min(min_stable, *rep.n_fin);
            }
        }
    }
    const bool ok_c = stable_cells > 0 && min_stable < 1.0;

    return {ok_a && ok_b && ok_c,
            fmt("(a) dead loop == bare cavity: %s; (b) decoupled n_fin "
                "tracks bath (got %.6g vs %.6g): %s; (c) ground state on "
                "46x17 grid: %s (min stable n_fin=%.4g over %d stable "
                "cells, want <1)",
                ok_a ? "yes" : "NO", rc.n_fin.value_or(-1.0), pb.n_m,
                ok_b ? "yes" : "NO", ok_c ? "yes" : "NO",
                stable_cells > 0 ? min_stable : -1.0, stable_cells)};
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Entry> criteria = {
        {"C1", c1}, {"C2", c2}, {"C3", c3}, {"C4", c4}, {"C5", c5},
        {"C6", c6}, {"C7", c7}, {"C8", c8}, {"C9", c9},
    };

    int failures = 0;
    for (const Entry& e : criteria) {
        Outcome o;
        try {
            o = e.run();
        } catch (const std::exception& ex) {
            o = {false, fmt("exception: %s", ex.what())};
        } catch (...) {
            o = {false, "unknown exception"};
        }
        std::printf("%s %s (%s)\n", e.name, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures;
}
