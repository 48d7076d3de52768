#include "adiabat/errors.hpp"

namespace adiabat {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateMatchAmbiguity: return "DegenerateMatchAmbiguity";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::DegenerateGap: return "DegenerateGap";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::PhaseUnderResolved: return "PhaseUnderResolved";
    }
    return "Unknown";
}

bool is_numerical_guard(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::GridTooCoarse:
    case ErrorKind::PhaseUnderResolved:
    case ErrorKind::DegenerateGap:
    case ErrorKind::DegenerateMatchAmbiguity:
    case ErrorKind::NoConvergence:
        return true;
    default:
        return false;
    }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
{
}

} // namespace adiabat
