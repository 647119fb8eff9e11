#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cjet {

enum class ErrorKind {
    InvalidArgument,
    NonFinite,
    OrderExceeded,
    NonpositiveLeadingCoefficient,
    NonzeroInnerConstant,
    NotInvertible,
    NotRegular,
    NotAType,
    TangentDirection,
    DegenerateGrid,
    DegenerateMeasurement,
    CollinearDirections,
    InconsistentMeasurement,
    IllConditioned,
    ZeroCurvatureMeasurement,
    AsymptoticDirection,
    DegenerateParametrization,
    RootRefinementFailed,
    DegenerateConfiguration,
    NoRealRoots,
    NoRealPoint,
    BranchSearchFailed,
    FlatUmbilic,
};

inline constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::OrderExceeded: return "OrderExceeded";
    case ErrorKind::NonpositiveLeadingCoefficient: return "NonpositiveLeadingCoefficient";
    case ErrorKind::NonzeroInnerConstant: return "NonzeroInnerConstant";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::NotRegular: return "NotRegular";
    case ErrorKind::NotAType: return "NotAType";
    case ErrorKind::TangentDirection: return "TangentDirection";
    case ErrorKind::DegenerateGrid: return "DegenerateGrid";
    case ErrorKind::DegenerateMeasurement: return "DegenerateMeasurement";
    case ErrorKind::CollinearDirections: return "CollinearDirections";
    case ErrorKind::InconsistentMeasurement: return "InconsistentMeasurement";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::ZeroCurvatureMeasurement: return "ZeroCurvatureMeasurement";
    case ErrorKind::AsymptoticDirection: return "AsymptoticDirection";
    case ErrorKind::DegenerateParametrization: return "DegenerateParametrization";
    case ErrorKind::RootRefinementFailed: return "RootRefinementFailed";
    case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::NoRealRoots: return "NoRealRoots";
    case ErrorKind::NoRealPoint: return "NoRealPoint";
    case ErrorKind::BranchSearchFailed: return "BranchSearchFailed";
    case ErrorKind::FlatUmbilic: return "FlatUmbilic";
    }
    return "Unknown";
}

/// Errors that describe malformed input rather than a degenerate geometric
/// configuration.
inline constexpr bool is_input_error(ErrorKind kind) noexcept {
    return kind == ErrorKind::InvalidArgument || kind == ErrorKind::NonFinite ||
           kind == ErrorKind::OrderExceeded;
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace cjet
