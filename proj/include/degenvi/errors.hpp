#pragma once

#include <stdexcept>
#include <string>

namespace degenvi {

enum class Errc {
    InvalidCoefficient,
    DegenerateInput,
    NonIntegrable,
    PreconditionViolated,
    UnsupportedDomainKind,
    UnsupportedKind,
    ZeroFunction,
    NonPositiveFunction,
    BallNotContained,
    DegenerateDomain,
    QuadratureFailure,
    NotFound,
    MeshTooCoarse,
    SingularSystem,
    NewtonDivergence,
    SingularJacobian,
    ScheduleExhausted,
    NotConverged,
    EmptyBall,
    InsufficientRadii,
    ConfigError,
    IoError,
};

const char* to_string(Errc code);

/// Base of every error raised by the library. The code identifies the
/// failure class; the message carries the specifics.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// A model coefficient violates its admissibility constraint.
class InvalidCoefficient : public Error {
public:
    InvalidCoefficient(std::string field, std::string constraint)
        : Error(Errc::InvalidCoefficient, field + " must satisfy " + constraint),
          field_(std::move(field)), constraint_(std::move(constraint)) {}

    const std::string& field() const noexcept { return field_; }
    const std::string& constraint() const noexcept { return constraint_; }

private:
    std::string field_;
    std::string constraint_;
};

}  // namespace degenvi
