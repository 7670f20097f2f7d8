#pragma once

#include <stdexcept>
#include <string>

namespace casmode {

// Base class for all numerical failures raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A bracketing root solve was handed endpoints without a sign change.
class NoBracketError : public Error {
public:
    explicit NoBracketError(const std::string& msg) : Error(msg) {}
};

// Iteration limit exceeded; carries the best estimate found so far.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double best)
        : Error(msg), best_estimate(best) {}
    double best_estimate;
};

// Quadrature could not reach the requested tolerance; carries partial results.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& msg, double partial, double err)
        : Error(msg), partial_value(partial), error_estimate(err) {}
    double partial_value;
    double error_estimate;
};

// Branch continuation lost the root; carries the last good point.
class BranchLostError : public Error {
public:
    BranchLostError(const std::string& msg, double param, double root)
        : Error(msg), last_param(param), last_root(root) {}
    double last_param;
    double last_root;
};

// A mode family was requested where none exists.
class NoModeError : public Error {
public:
    explicit NoModeError(const std::string& msg) : Error(msg) {}
};

} // namespace casmode
