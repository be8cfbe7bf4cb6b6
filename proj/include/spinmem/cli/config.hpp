// Experiment configuration: YAML parsing, validation and the
// canonical JSON form used for hashing and manifests.
//
// Config units are ordinary frequencies (MHz, GHz) and ns; conversion to rad/s
// and s happens when the model objects are built.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "spinmem/device.hpp"

namespace spinmem::cli {

enum class Method { spectral, oracle, both };

std::string_view to_string(Method m) noexcept;

// Inclusive grid start, start + step, ... <= stop (+ half a step of slack).
struct Range {
    double start{0.0};
    double stop{0.0};
    double step{1.0};

    std::vector<double> values() const;
};

struct GroupConfig {
    std::string label;
    double center_ghz{0.0};
    double coupling_mhz{0.0};
    double fwhm_mhz{0.0};
};

struct DeviceConfig {
    double qubit_ghz{2.607};
    double qubit_coupling_mhz{7.2};
    double p_eq{0.08};
    double bus_max_ghz{3.004};
    double bus_min_ghz{2.5};
    double t_cav_us{1.5};  // kappa = 1 / T_cav; 0 means lossless
    double hf_splitting_mhz{2.3};
    double gamma0_per_us{0.0};  // single-spin emission rate, 1/us
    std::vector<GroupConfig> groups{{"-I", 2.84, 2.9, 1.6},
                                    {"-III", 2.865, 3.8, 2.4},
                                    {"+III", 2.89, 3.8, 2.4},
                                    {"+I", 2.91, 2.9, 1.6}};

    HybridDeviceModel build() const;
};

struct NumericsConfig {
    std::optional<Method> method;  // per-experiment default when absent
    double dt_ns{0.1};
    std::size_t n_spins{2401};
    double oracle_span_mhz{120.0};
    double grid_span_mhz{400.0};
    double grid_spacing_mhz{0.05};
};

struct RabiExperiment {
    std::string group{"-III"};
    double bus_detuning_mhz{0.0};
    Range tau_ns{0.0, 500.0, 0.5};
};

struct ChevronExperiment {
    std::string group{"-I"};  // or "all"
    Range bus_ghz{2.83, 2.85, 0.0005};
    Range tau_ns{0.0, 300.0, 2.0};
};

struct CoherenceExperiment {
    std::string group{"-I"};
    Range tau_ns{0.0, 400.0, 1.0};
};

struct RamseyExperiment {
    std::string group{"-I"};
    double delta_mhz{38.0};
    Range tau_ns{0.0, 1997.5, 2.5};
    std::optional<double> tau_half_ns;  // default: half the storage time
    std::string window{"hann"};         // or "rectangular"
};

struct SpectroscopyExperiment {
    Range bus_ghz{2.82, 2.93, 0.001};
    Range probe_ghz{2.82, 2.93, 0.0002};
    Range qubit_bus_ghz{2.55, 2.66, 0.001};  // anticrossing scan
};

struct AswapExperiment {
    double start_ghz{2.52};
    std::vector<std::pair<double, double>> segments{{2.589, 60.0}, {2.643, 350.0}, {2.687, 40.0}};  // (GHz, ns)
    std::vector<double> speedups{1.0, 10.0};
};

struct ReadoutExperiment {
    double p_sw0{0.08 * 0.9};
    double p_sw_pi{0.92 * 0.9};
    std::optional<double> p_eq;  // default: device p_eq
};

using Experiment = std::variant<RabiExperiment, ChevronExperiment, CoherenceExperiment, RamseyExperiment,
                                SpectroscopyExperiment, AswapExperiment, ReadoutExperiment>;

std::string_view experiment_name(const Experiment& e) noexcept;

struct ExperimentConfig {
    DeviceConfig device;
    Experiment experiment;
    NumericsConfig numerics;

    // Method after applying the experiment default. Throws validation for a
    // method the experiment does not support.
    Method method() const;
};

// Throws Error(parse) with line/column, or Error(validation) naming the field.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Fully resolved config with sorted keys; parse_config(to_json(c).dump()) == c.
nlohmann::json to_json(const ExperimentConfig& config);
std::string canonical_text(const ExperimentConfig& config);
// SHA-256 hex digest of canonical_text.
std::string config_hash(const ExperimentConfig& config);

}  // namespace spinmem::cli
