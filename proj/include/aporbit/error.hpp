#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aporbit {

// Every failure raised by the library derives from Error. The CLI maps
// ConfigError to exit code 3 and everything else to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t expected, std::size_t got)
        : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                std::to_string(got)) {}
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

// Map output (or orbit iterate) left [-1,1]^d beyond the clamp band.
// `step` is the orbit time of the offending iterate, or -1 for a single evaluation.
class RangeViolation : public Error {
public:
    RangeViolation(const std::string& what, long long step = -1) : Error(what), step_(step) {}
    long long step() const noexcept { return step_; }

private:
    long long step_;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class UnknownIdentifier : public Error {
public:
    using Error::Error;
};

class ArityError : public Error {
public:
    using Error::Error;
};

class EvaluationError : public Error {
public:
    using Error::Error;
};

class AnalyticUnavailable : public Error {
public:
    using Error::Error;
};

class DanglingState : public Error {
public:
    DanglingState(const std::string& what, long long step) : Error(what), step_(step) {}
    long long step() const noexcept { return step_; }

private:
    long long step_;
};

class NoCycleWithinHorizon : public Error {
public:
    using Error::Error;
};

class NotPeriodic : public Error {
public:
    using Error::Error;
};

class BeforePhaseOrigin : public Error {
public:
    using Error::Error;
};

class Overflow : public Error {
public:
    using Error::Error;
};

class RootFindingFailed : public Error {
public:
    using Error::Error;
};

class IllConditioned : public Error {
public:
    IllConditioned(const std::string& what, double condition)
        : Error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

class RefusedUnbounded : public Error {
public:
    using Error::Error;
};

}  // namespace aporbit
