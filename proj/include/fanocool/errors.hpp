#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace fanocool {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A single violated parameter constraint.
struct ParameterViolation {
    std::string name;       ///< parameter name, e.g. "eta"
    double value;           ///< offending value
    std::string constraint; ///< human-readable constraint, e.g. "< 1"
};

/// One or more physical/feedback parameters violate their invariants.
/// Violations are aggregated so a caller sees every problem at once.
class InvalidParameter : public Error {
public:
    explicit InvalidParameter(std::vector<ParameterViolation> violations)
        : Error(format(violations)), violations_(std::move(violations)) {}

    InvalidParameter(const std::string& name, double value, const std::string& constraint)
        : InvalidParameter(std::vector<ParameterViolation>{{name, value, constraint}}) {}

    const std::vector<ParameterViolation>& violations() const { return violations_; }

private:
    static std::string format(const std::vector<ParameterViolation>& vs) {
        std::string msg = "invalid parameter(s):";
        for (const auto& v : vs)
            msg += " [" + v.name + "=" + std::to_string(v.value) + " violates " + v.constraint + "]";
        return msg;
    }
    std::vector<ParameterViolation> violations_;
};

/// Drift matrix has an eigenvalue with nonnegative real part; the
/// steady-state Lyapunov problem has no (finite) solution.
class UnstableDrift : public Error {
public:
    explicit UnstableDrift(double max_real)
        : Error("drift matrix is not strictly stable (max Re eigenvalue = " +
                std::to_string(max_real) + ")"),
          max_real_(max_real) {}
    double max_real_eigenvalue() const { return max_real_; }

private:
    double max_real_;
};

/// The Lyapunov solve finished but missed the residual target.  The
/// computed solution and achieved residual are carried for diagnostics.
class IllConditioned : public Error {
public:
    IllConditioned(Eigen::MatrixXd V, double residual)
        : Error("Lyapunov residual target unmet (achieved " + std::to_string(residual) + ")"),
          V_(std::move(V)), residual_(residual) {}
    const Eigen::MatrixXd& solution() const { return V_; }
    double residual() const { return residual_; }

private:
    Eigen::MatrixXd V_;
    double residual_;
};

/// Explicit integrator step exceeds the stability bound dt*||M|| <= 0.1.
class StepTooLarge : public Error {
public:
    StepTooLarge(double dt, double norm)
        : Error("integration step too large: dt*||M|| = " + std::to_string(dt * norm) + " > 0.1") {}
};

/// Eigenvalue iteration failed to converge.
class ConvergenceFailure : public Error {
public:
    explicit ConvergenceFailure(const std::string& what) : Error(what) {}
};

/// Semiclassical steady-state denominator is (numerically) singular.
class SingularSteadyState : public Error {
public:
    explicit SingularSteadyState(double denom_mag)
        : Error("steady-state denominator |chi_a^-1 chi_f^-1 + G^2| = " +
                std::to_string(denom_mag) + " is below threshold") {}
};

/// Diffusion matrix would acquire a negative diagonal entry; the noise
/// model is invalid for these parameters.
class NegativeDiffusion : public Error {
public:
    explicit NegativeDiffusion(const std::string& what) : Error(what) {}
};

/// Malformed sweep specification.
class SpecError : public Error {
public:
    explicit SpecError(const std::string& what) : Error(what) {}
};

/// Every cell of a sweep was unstable; no minimum exists.
class AllUnstable : public Error {
public:
    AllUnstable() : Error("all sweep cells are unstable or absent") {}
};

/// Malformed configuration file or override.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

} // namespace fanocool
