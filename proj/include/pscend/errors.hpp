#pragma once

#include <stdexcept>
#include <string>

namespace pscend {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Metric matrix singular or too badly conditioned at a stencil point.
class DegenerateMetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Richardson comparison shows the finite-difference step is not in the
/// asymptotic regime.
class UnreliableStepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A stated geometric hypothesis does not hold for the given data.
class HypothesisError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The variational minimizer drifted to the edge of the admissible interval.
class BoundaryEscapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Output file cannot be written, or would be overwritten without --force.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid run configuration; field() names the offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace pscend
