#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dispersive {

enum class ErrorKind {
    InvalidSpec,
    InvalidArgument,
    SingularReduction,
    UnreducedRawForms,
    InsufficientStencil,
    GridTooSmall,
    NumericallySingular,
    EmptyNullspace,
    InadmissibleCoefficients,
    Io,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidSpec: return "InvalidSpec";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::SingularReduction: return "SingularReduction";
        case ErrorKind::UnreducedRawForms: return "UnreducedRawForms";
        case ErrorKind::InsufficientStencil: return "InsufficientStencil";
        case ErrorKind::GridTooSmall: return "GridTooSmall";
        case ErrorKind::NumericallySingular: return "NumericallySingular";
        case ErrorKind::EmptyNullspace: return "EmptyNullspace";
        case ErrorKind::InadmissibleCoefficients: return "InadmissibleCoefficients";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace dispersive
