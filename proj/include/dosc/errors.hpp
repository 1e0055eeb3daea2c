#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dosc {

/// Argument outside the supported domain of a special function or operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid transformation parameters. `field()` names the offending parameter.
class ParameterError : public std::invalid_argument {
public:
    ParameterError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// The combination w(z) vanished (or came too close to zero) at `z()`.
class NodeError : public std::runtime_error {
public:
    NodeError(double z, const std::string& what)
        : std::runtime_error(what), z_(z) {}

    double z() const noexcept { return z_; }

private:
    double z_;
};

/// A series or iteration failed to reach its tolerance within its term budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Richardson levels disagree by more than the guard allows: the sampler is
/// not smooth at the probe point, or the steps are badly chosen.
class StepSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A propagated state reached the edge of the periodic box.
class BoundaryLeakError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GridMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A run configuration that is malformed or names invalid parameters.
/// `field()` is the dotted path of the offending entry, e.g. "params.c1".
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace dosc
