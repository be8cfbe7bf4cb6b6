// Single exception type carrying a machine-checkable error code

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spinmem {

enum class ErrorCode {
    invalid_parameter,
    invalid_grid,
    window_exceeded,
    coverage,
    step_size,
    numerical_instability,
    unknown_group,
    singular_flux,
    out_of_range,
    singular_calibration,
    fit_nonconvergence,
    series_too_short,
    parse,
    validation,
    schema_mismatch,
    io,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

    ErrorCode code() const noexcept { return code_; }
    // Message without the code prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace spinmem
