#include "spinmem/error.hpp"

namespace spinmem {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_parameter: return "invalid-parameter";
        case ErrorCode::invalid_grid: return "invalid-grid";
        case ErrorCode::window_exceeded: return "window-exceeded";
        case ErrorCode::coverage: return "coverage";
        case ErrorCode::step_size: return "step-size";
        case ErrorCode::numerical_instability: return "numerical-instability";
        case ErrorCode::unknown_group: return "unknown-group";
        case ErrorCode::singular_flux: return "singular-flux";
        case ErrorCode::out_of_range: return "out-of-range";
        case ErrorCode::singular_calibration: return "singular-calibration";
        case ErrorCode::fit_nonconvergence: return "fit-nonconvergence";
        case ErrorCode::series_too_short: return "series-too-short";
        case ErrorCode::parse: return "parse";
        case ErrorCode::validation: return "validation";
        case ErrorCode::schema_mismatch: return "schema-mismatch";
        case ErrorCode::io: return "io";
    }
    return "unknown";
}

}  // namespace spinmem
