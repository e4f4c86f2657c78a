#pragma once

#include <stdexcept>
#include <string>

namespace pwc {

/// Error categories raised by the library. Names mirror the diagnostics
/// printed by the CLI (`errc_name`).
enum class errc {
    non_monotone_partition,
    lambda_out_of_range,
    branch_escapes_unit,
    point_out_of_domain,
    precision_loss,
    empty_itinerary,
    float_mode_unsupported,
    not_coprime,
    bad_range,
    parameter_outside_triangle,
    identically_zero,
    degenerate_fit,
    bound_violation,
    invalid_argument,
    io_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::non_monotone_partition: return "NonMonotonePartition";
        case errc::lambda_out_of_range: return "LambdaOutOfRange";
        case errc::branch_escapes_unit: return "BranchEscapesUnit";
        case errc::point_out_of_domain: return "PointOutOfDomain";
        case errc::precision_loss: return "PrecisionLoss";
        case errc::empty_itinerary: return "EmptyItinerary";
        case errc::float_mode_unsupported: return "FloatModeUnsupported";
        case errc::not_coprime: return "NotCoprime";
        case errc::bad_range: return "BadRange";
        case errc::parameter_outside_triangle: return "ParameterOutsideTriangle";
        case errc::identically_zero: return "IdenticallyZero";
        case errc::degenerate_fit: return "DegenerateFit";
        case errc::bound_violation: return "BoundViolation";
        case errc::invalid_argument: return "InvalidArgument";
        case errc::io_error: return "IoError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace pwc
