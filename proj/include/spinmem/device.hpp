// Parameter set of the qubit / tunable bus / NV-ensemble circuit

#pragma once

#include <vector>

#include "spinmem/spectral/ensemble.hpp"
#include "spinmem/units.hpp"

namespace spinmem {

struct QubitParams {
    double omega_q{ghz(2.607)};  // rad/s
    double g_q{mhz(7.2)};        // qubit-bus coupling, rad/s
    double p_eq{0.08};           // thermal excited population
};

struct BusModel {
    double omega_max{ghz(3.004)};  // omega_B at zero flux, rad/s
    double omega_min{ghz(2.5)};    // omega_B at 0.45 flux quanta, rad/s
    double kappa{1.0 / us(1.5)};   // energy decay rate from T_cav = 1.5 us, rad/s
};

struct HybridDeviceModel {
    QubitParams qubit;
    BusModel bus;
    std::vector<spectral::EnsembleGroup> groups;

    // Throws unknown_group when the label is not part of the device.
    const spectral::EnsembleGroup& group(spectral::GroupLabel label) const;
    spectral::BusParams bus_at(double omega_b) const noexcept { return {omega_b, bus.kappa}; }

    void validate() const;

    // Four groups at 2.84 / 2.865 / 2.89 / 2.91 GHz, g_I = 2.9 MHz, g_III = 3.8 MHz,
    // hyperfine triplets split by 2.3 MHz with 1.6 (I) and 2.4 (III) MHz lines.
    static HybridDeviceModel reference();
};

struct GroupSpec {
    spectral::GroupLabel label;
    double center;  // rad/s
    double g;       // rad/s
    double fwhm;    // rad/s
};

spectral::EnsembleGroup make_hyperfine_group(const GroupSpec& spec, double hf_splitting,
                                             double gamma0 = 0.0);

}  // namespace spinmem
