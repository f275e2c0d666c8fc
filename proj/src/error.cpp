#include "ontic/error.hpp"

namespace ontic {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InfeasibleEnergy: return "InfeasibleEnergy";
        case ErrorKind::SizeLimit: return "SizeLimit";
        case ErrorKind::DegenerateEnergy: return "DegenerateEnergy";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::MissingTargets: return "MissingTargets";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NormalizationError: return "NormalizationError";
        case ErrorKind::InvalidModel: return "InvalidModel";
    }
    return "Unknown";
}

}  // namespace ontic
