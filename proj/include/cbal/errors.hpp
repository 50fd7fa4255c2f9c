#ifndef CBAL_ERRORS_HPP
#define CBAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cbal {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Covariance matrix is not symmetric positive definite (or a pivot is nonpositive).
class InvalidCovarianceError : public Error {
public:
    explicit InvalidCovarianceError(const std::string& msg) : Error(msg) {}
};

/// Halfspace normal vector is zero (or an unusable pivot was requested).
class InvalidHalfspaceError : public Error {
public:
    explicit InvalidHalfspaceError(const std::string& msg) : Error(msg) {}
};

/// Truncation keeps (or removes) less than the configured mass floor.
class DegenerateTruncationError : public Error {
public:
    explicit DegenerateTruncationError(const std::string& msg) : Error(msg) {}
};

/// Probe power vector is zero or has negative entries.
class InvalidProbeError : public Error {
public:
    explicit InvalidProbeError(const std::string& msg) : Error(msg) {}
};

/// Total site precision is not positive definite.
class InvalidStateError : public Error {
public:
    explicit InvalidStateError(const std::string& msg) : Error(msg) {}
};

/// Removing a site leaves a non-positive-definite cavity.
class CavityFailureError : public Error {
public:
    explicit CavityFailureError(const std::string& msg) : Error(msg) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Step index at or past the probing horizon.
class HorizonExhaustedError : public Error {
public:
    explicit HorizonExhaustedError(const std::string& msg) : Error(msg) {}
};

/// Posterior too degenerate to evaluate a halfspace cdf.
class DegeneratePosteriorError : public Error {
public:
    explicit DegeneratePosteriorError(const std::string& msg) : Error(msg) {}
};

/// Direction redraw budget exhausted without a valid probe.
class ProbeDesignFailureError : public Error {
public:
    explicit ProbeDesignFailureError(const std::string& msg) : Error(msg) {}
};

/// No feasible point found inside the polytope within budget.
class InfeasibleRegionError : public Error {
public:
    explicit InfeasibleRegionError(const std::string& msg) : Error(msg) {}
};

/// File could not be written or read; message carries the path.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace cbal

#endif
