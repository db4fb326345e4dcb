#ifndef DWIG_ERRORS_HPP
#define DWIG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dwig {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The 6x6 inductance matrix is not invertible at the working tolerance.
class SingularInductanceMatrix : public Error {
public:
    explicit SingularInductanceMatrix(const std::string& what) : Error(what) {}
};

/// The electrical steady-state system has no unique solution.
class SingularSystem : public Error {
public:
    explicit SingularSystem(const std::string& what) : Error(what) {}
};

/// A simulated state left the finite working range.
class DivergedState : public Error {
public:
    DivergedState(const std::string& what, double at_time)
        : Error(what), time(at_time) {}
    double time;
};

/// Vector/window length does not match the model order.
class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

/// An estimator update produced a non-finite value.
class NonFiniteUpdate : public Error {
public:
    explicit NonFiniteUpdate(const std::string& what) : Error(what) {}
};

/// The control law denominator is too close to zero to evaluate.
class UnrealizableLaw : public Error {
public:
    explicit UnrealizableLaw(const std::string& what) : Error(what) {}
};

/// A configuration file is malformed, incomplete, or carries unknown keys.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

} // namespace dwig

#endif
