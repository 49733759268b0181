#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hb {

enum class ErrorCode {
    CurvatureNotPositive,
    DiagonalPoint,
    NearGrazing,
    NotStrictlyConvex,
    InvalidPolygon,
    InvalidProfile,
    InvalidWidth,
    MarkInCorner,
    PerturbationTooLarge,
    BracketInverted,
    BoundViolated,
    InconsistentChords,
    ResolutionTooLarge,
    StabilityViolated,
    InvalidInput,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; `code()` carries the failure kind.
// `index()` is the failing step or sample where one exists, otherwise -1.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, long index = -1)
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          code_(code), index_(index) {}

    ErrorCode code() const noexcept { return code_; }
    long index() const noexcept { return index_; }

private:
    ErrorCode code_;
    long index_;
};

}  // namespace hb
