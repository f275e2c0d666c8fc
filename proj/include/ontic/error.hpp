#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ontic {

enum class ErrorKind {
    InfeasibleEnergy,
    SizeLimit,
    DegenerateEnergy,
    NoConvergence,
    DomainError,
    MissingTargets,
    DimensionMismatch,
    NormalizationError,
    InvalidModel,
};

std::string_view to_string(ErrorKind kind);

/// Computation error carrying a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace ontic
