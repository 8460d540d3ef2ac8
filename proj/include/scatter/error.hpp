#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scatter {

enum class ErrorKind {
    invalid_argument,
    static_limit,
    not_static,
    out_of_range,
    truncation_failure,
    singular_system,
    unstable_step,
    bad_window,
    resolution_error,
    cfl_violation,
    kinematic_violation,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every recoverable failure in the library is reported through this type; the
/// kind lets callers route (e.g. static-limit -> analytic formula).
class ScatterError : public std::runtime_error {
public:
    ScatterError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Truncation failures carry the defect that was achieved before giving up.
class TruncationFailure : public ScatterError {
public:
    TruncationFailure(double achieved_defect, const std::string& what)
        : ScatterError(ErrorKind::truncation_failure, what), achieved_defect_(achieved_defect) {}

    double achieved_defect() const noexcept { return achieved_defect_; }

private:
    double achieved_defect_;
};

}  // namespace scatter
