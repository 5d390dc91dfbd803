#pragma once

#include <stdexcept>
#include <string>

namespace krasovskii {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NotSquare : public Error {
public:
    using Error::Error;
};

class NotSymmetric : public Error {
public:
    using Error::Error;
};

/// Newton iteration exhausted max_iterations without meeting the tolerance.
class NonConvergence : public Error {
public:
    NonConvergence(int iterations, double last_residual_norm)
        : Error("Newton did not converge after " + std::to_string(iterations) +
                " iterations (last residual sup-norm " +
                std::to_string(last_residual_norm) + ")"),
          iterations(iterations),
          last_residual_norm(last_residual_norm) {}

    int iterations;
    double last_residual_norm;
};

/// The linear solve inside a Newton iteration failed.
class SingularJacobian : public Error {
public:
    explicit SingularJacobian(int iteration)
        : Error("singular Jacobian at Newton iteration " + std::to_string(iteration)),
          iteration(iteration) {}

    int iteration;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

/// A simulation step could not be completed; carries the step index and cause.
class StepFailure : public Error {
public:
    StepFailure(long step, const std::string& cause)
        : Error("step " + std::to_string(step) + " failed: " + cause), step(step), cause(cause) {}

    long step;
    std::string cause;
};

/// A checkable well-posedness matrix (A_s, A_c, Pi) is singular.
class IllPosed : public Error {
public:
    using Error::Error;
};

class WindowTooShort : public Error {
public:
    using Error::Error;
};

class MismatchedSystems : public Error {
public:
    using Error::Error;
};

class NonpositiveCharge : public Error {
public:
    using Error::Error;
};

/// State left the admissible domain (e.g. buck node charge q_i <= 0).
class DomainViolation : public Error {
public:
    using Error::Error;
};

class InfeasibleReference : public Error {
public:
    using Error::Error;
};

class HistoryIncomplete : public Error {
public:
    using Error::Error;
};

class DisconnectedGraph : public Error {
public:
    using Error::Error;
};

class InvariantViolation : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace krasovskii
