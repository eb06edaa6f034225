#ifndef MEMSTEFAN_ERROR_HPP
#define MEMSTEFAN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace memstefan {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument or configuration value violates a documented invariant.
/// `field()` names the offending parameter when one is known.
class InputError : public Error {
public:
    explicit InputError(const std::string& message, std::string field = {})
        : Error(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A query point lies outside the region where the object is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Runtime failures of the time-marching solver. `time()` is the level at
/// which the failure occurred (negative when unknown).
class SolverError : public Error {
public:
    explicit SolverError(const std::string& message, double time = -1.0)
        : Error(message), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

class StepSizeError : public SolverError {
public:
    using SolverError::SolverError;
};

class StabilityError : public SolverError {
public:
    using SolverError::SolverError;
};

class FrontSolveError : public SolverError {
public:
    using SolverError::SolverError;
};

class MonotonicityError : public SolverError {
public:
    using SolverError::SolverError;
};

} // namespace memstefan

#endif // MEMSTEFAN_ERROR_HPP
