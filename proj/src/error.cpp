#include "scatter/error.hpp"

namespace scatter {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid-argument";
        case ErrorKind::static_limit: return "static-limit";
        case ErrorKind::not_static: return "not-static";
        case ErrorKind::out_of_range: return "out-of-range";
        case ErrorKind::truncation_failure: return "truncation-failure";
        case ErrorKind::singular_system: return "singular-system";
        case ErrorKind::unstable_step: return "unstable-step";
        case ErrorKind::bad_window: return "bad-window";
        case ErrorKind::resolution_error: return "resolution-error";
        case ErrorKind::cfl_violation: return "cfl-violation";
        case ErrorKind::kinematic_violation: return "kinematic-violation";
    }
    return "unknown";
}

}  // namespace scatter
