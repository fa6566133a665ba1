#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "fanocool/errors.hpp"

namespace fanocool {

/// How a stability verdict was reached.
enum class StabilityMethod { RouthHurwitz, Eigenvalue, Both };

/// Result of a drift-matrix stability test.
struct StabilityVerdict {
    bool stable = false;
    double max_real_eigenvalue = 0;  ///< [rad/s]
    StabilityMethod method = StabilityMethod::Eigenvalue;
    /// True when |max Re λ| sits inside the tolerance band
    /// 1e-9·max(1,‖M‖_F), or when the Routh array hit a degenerate
    /// pivot: the boolean verdict is then unreliable.
    bool marginal = false;
};

namespace detail {

/// Parlett-Reinsch balancing: A ← D⁻¹AD in place (D = diag(d), powers
/// of 2 so the transform is exact), returning d.  Equalizes row/column
/// norms, which this model needs badly: decay-rate ratios reach ~1e7.
inline Eigen::VectorXd balance_inplace(Eigen::MatrixXd& A) {
    const Eigen::Index n = A.rows();
    Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
    const double radix = 2.0;
    bool converged = false;
    while (!converged) {
        converged = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0, r = 0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(A(j, i));
                r += std::abs(A(i, j));
            }
            if (c == 0 || r == 0) continue;
            const double s = c + r;
            double f = 1.0;
            while (c < r / radix) { c *= radix; r /= radix; f *= radix; }
            while (c >= r * radix) { c /= radix; r *= radix; f /= radix; }
            if (c + r < 0.95 * s) {
                converged = false;
                d(i) *= f;
                A.row(i) /= f;
                A.col(i) *= f;
            }
        }
    }
    return d;
}

} // namespace detail

/// Eigenvalues of a small real matrix (n ≤ 8), balanced before the QR
/// iteration so the huge dynamic range of this model cannot wreck
/// convergence.  Order is unspecified.
inline std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& M) {
    if (M.rows() != M.cols())
        throw SpecError("eigenvalues: matrix must be square");
    if (M.rows() > 8)
        throw SpecError("eigenvalues: matrix larger than 8x8");
    Eigen::MatrixXd B = M;
    detail::balance_inplace(B);
    Eigen::EigenSolver<Eigen::MatrixXd> es(B, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw ConvergenceFailure("eigenvalue QR iteration did not converge");
    std::vector<std::complex<double>> out(static_cast<size_t>(M.rows()));
    for (Eigen::Index i = 0; i < M.rows(); ++i) out[static_cast<size_t>(i)] = es.eigenvalues()(i);
    return out;
}

/// Largest real part over the spectrum of M.
inline double max_real_eigenvalue(const Eigen::MatrixXd& M) {
    double mx = -std::numeric_limits<double>::infinity();
    for (const auto& z : eigenvalues(M)) mx = std::max(mx, z.real());
    return mx;
}

/// Eigenvalue-based stability verdict with the marginal tolerance band.
inline StabilityVerdict stability(const Eigen::MatrixXd& M) {
    StabilityVerdict v;
    v.method = StabilityMethod::Eigenvalue;
    v.max_real_eigenvalue = max_real_eigenvalue(M);
    v.stable = v.max_real_eigenvalue < 0;
    v.marginal =
        std::abs(v.max_real_eigenvalue) < 1e-9 * std::max(1.0, M.norm());
    return v;
}

/// Solve the steady-state Lyapunov equation MV + VMᵀ = −N for symmetric
/// V via balancing + complex Schur reduction + triangular
/// back-substitution (Bartels-Stewart).  M must be strictly stable
/// unless allow_unstable is set (diagnostic use).  The returned V is
/// exactly symmetric and satisfies ‖MV+VMᵀ+N‖_F/‖N‖_F ≤ 1e-9, else
/// IllConditioned carries the best V found and the achieved residual.
inline Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& M,
                                      const Eigen::MatrixXd& N,
                                      bool allow_unstable = false) {
    using CMat = Eigen::MatrixXcd;
    const Eigen::Index n = M.rows();
    if (M.cols() != n || N.rows() != n || N.cols() != n)
        throw SpecError("solve_lyapunov: M and N must be square and same size");

    if (!allow_unstable) {
        const double mx = max_real_eigenvalue(M);
        if (mx >= 0) throw UnstableDrift(mx);
    }

    const double N_norm = N.norm();
    if (N_norm == 0) return Eigen::MatrixXd::Zero(n, n);

    // Balance: Mb = D⁻¹MD, and correspondingly Vb = D⁻¹VD⁻¹, Nb = D⁻¹ND⁻¹,
    // which preserves the Lyapunov structure Mb·Vb + Vb·Mbᵀ = −Nb.
    Eigen::MatrixXd Mb = M;
    const Eigen::VectorXd d = detail::balance_inplace(Mb);
    const Eigen::VectorXd dinv = d.cwiseInverse();
    const Eigen::MatrixXd Nb = dinv.asDiagonal() * N * dinv.asDiagonal();

    // Complex Schur: Mb = Q T Qᴴ with T upper triangular.
    Eigen::ComplexSchur<Eigen::MatrixXd> schur(Mb, /*computeU=*/true);
    if (schur.info() != Eigen::Success)
        throw ConvergenceFailure("Schur decomposition did not converge");
    const CMat T = schur.matrixT();
    const CMat Q = schur.matrixU();

    // Transformed unknown Vt = Qᴴ Vb conj(Q) satisfies T·Vt + Vt·Tᵀ = −Nt.
    const CMat Nt = Q.adjoint() * Nb * Q.conjugate();
    CMat Vt = CMat::Zero(n, n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        for (Eigen::Index j = n - 1; j >= 0; --j) {
            std::complex<double> rhs = -Nt(i, j);
            for (Eigen::Index k = i + 1; k < n; ++k) rhs -= T(i, k) * Vt(k, j);
            for (Eigen::Index k = j + 1; k < n; ++k) rhs -= Vt(i, k) * T(j, k);
            Vt(i, j) = rhs / (T(i, i) + T(j, j));
        }
    }

    // Undo the Schur and balancing transforms; V is real symmetric, so
    // discard the roundoff-level imaginary part and symmetrize.
    Eigen::MatrixXd V = (Q * Vt * Q.transpose()).real();
    V = d.asDiagonal() * V * d.asDiagonal();
    V = ((V + V.transpose()) / 2.0).eval();

    const double residual = (M * V + V * M.transpose() + N).norm() / N_norm;
    if (!(residual <= 1e-9)) throw IllConditioned(V, residual);
    return V;
}

/// Fourth-order Runge-Kutta integration of dV/dt = MV + VMᵀ + N from V0
/// over [0, t_final] with step dt (last step shortened to land exactly
/// on t_final).  V is re-symmetrized after every step.
inline Eigen::MatrixXd integrate_covariance(const Eigen::MatrixXd& M,
                                            const Eigen::MatrixXd& N,
                                            const Eigen::MatrixXd& V0,
                                            double t_final, double dt) {
    if (!(dt > 0)) throw StepTooLarge(dt, M.norm());
    if (dt * M.norm() > 0.1) throw StepTooLarge(dt, M.norm());

    auto F = [&](const Eigen::MatrixXd& V) -> Eigen::MatrixXd {
        return M * V + V * M.transpose() + N;
    };

    Eigen::MatrixXd V = V0;
    double t = 0;
    while (t < t_final) {
        const double h = std::min(dt, t_final - t);
        const Eigen::MatrixXd k1 = F(V);
        const Eigen::MatrixXd k2 = F(V + (h / 2) * k1);
        const Eigen::MatrixXd k3 = F(V + (h / 2) * k2);
        const Eigen::MatrixXd k4 = F(V + h * k3);
        V += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        V = ((V + V.transpose()) / 2.0).eval();
        t += h;
    }
    return V;
}

/// Coefficients of det(sI − M) by the Faddeev-LeVerrier recurrence,
/// returned highest power first: out[k] multiplies s^{n−k}, out[0] = 1.
inline std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& M) {
    const Eigen::Index n = M.rows();
    if (M.cols() != n || n < 1)
        throw SpecError("characteristic_polynomial: need a square matrix, n >= 1");
    std::vector<double> c(static_cast<size_t>(n) + 1);
    c[0] = 1.0;
    Eigen::MatrixXd A = M;
    c[1] = -A.trace();
    for (Eigen::Index k = 2; k <= n; ++k) {
        A = M * (A + c[static_cast<size_t>(k) - 1] *
                         Eigen::MatrixXd::Identity(n, n));
        c[static_cast<size_t>(k)] = -A.trace() / static_cast<double>(k);
    }
    return c;
}

namespace detail {

/// Companion matrix of a monic polynomial given highest power first.
inline Eigen::MatrixXd companion(const std::vector<double>& c) {
    const Eigen::Index n = static_cast<Eigen::Index>(c.size()) - 1;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) C(i + 1, i) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i)
        C(i, n - 1) = -c[static_cast<size_t>(n - i)];
    return C;
}

} // namespace detail

/// Routh-Hurwitz stability verdict from characteristic-polynomial
/// coefficients (highest power first, leading coefficient 1).  The full
/// Routh array is built; any degenerate (zero) pivot sets `marginal`
/// and the verdict falls back to companion-matrix eigenvalues.  With a
/// clean array the verdict is the Routh array's own; companion-matrix
/// eigenvalues are still computed as a cross-check (method = Both) and
/// fill max_real_eigenvalue, and a disagreement between the two methods
/// — possible when the coefficients themselves carry large
/// floating-point error — is reported by raising `marginal`.
inline StabilityVerdict routh_hurwitz(const std::vector<double>& coeffs) {
    const size_t deg = coeffs.size() - 1;
    if (coeffs.size() < 2 || coeffs[0] != 1.0)
        throw SpecError("routh_hurwitz: need a monic polynomial of degree >= 1");

    // Rows of the Routh array; row 0 = even-index coefficients, row 1 = odd.
    const size_t cols = deg / 2 + 1;
    std::vector<std::vector<double>> row(deg + 1, std::vector<double>(cols, 0.0));
    for (size_t j = 0; j < coeffs.size(); ++j) row[j % 2][j / 2] = coeffs[j];

    bool degenerate = false;
    for (size_t i = 2; i <= deg && !degenerate; ++i) {
        const double pivot = row[i - 1][0];
        double scale = 0;
        for (size_t j = 0; j < cols; ++j)
            scale = std::max({scale, std::abs(row[i - 1][j]), std::abs(row[i - 2][j])});
        if (std::abs(pivot) <= 1e-13 * scale) { degenerate = true; break; }
        for (size_t j = 0; j + 1 < cols; ++j)
            row[i][j] = (pivot * row[i - 2][j + 1] - row[i - 2][0] * row[i - 1][j + 1]) / pivot;
    }

    StabilityVerdict v;
    const Eigen::MatrixXd C = detail::companion(coeffs);
    const StabilityVerdict ev = stability(C);
    v.max_real_eigenvalue = ev.max_real_eigenvalue;

    if (degenerate) {
        v.method = StabilityMethod::Eigenvalue;
        v.stable = ev.stable;
        v.marginal = true;
        return v;
    }

    bool routh_stable = true;
    for (size_t i = 0; i <= deg; ++i)
        if (!(row[i][0] > 0)) { routh_stable = false; break; }

    v.method = StabilityMethod::Both;
    v.stable = routh_stable;
    v.marginal = ev.marginal || (routh_stable != ev.stable);
    return v;
}

/// Routh-Hurwitz applied directly to a drift matrix.
inline StabilityVerdict routh_hurwitz(const Eigen::MatrixXd& M) {
    return routh_hurwitz(characteristic_polynomial(M));
}

} // namespace fanocool
