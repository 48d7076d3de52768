#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adiabat {

enum class ErrorKind {
    NonHermitian,
    NoConvergence,
    DegenerateMatchAmbiguity,
    InvalidParams,
    DimMismatch,
    GridTooCoarse,
    NotNormalized,
    DegenerateGap,
    GridMismatch,
    PhaseUnderResolved,
};

std::string_view to_string(ErrorKind kind) noexcept;

// True for the guards that signal an under-resolved or ill-conditioned
// numerical setup rather than a malformed request.
bool is_numerical_guard(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace adiabat
