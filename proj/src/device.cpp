#include "spinmem/device.hpp"

#include <string>

#include "spinmem/error.hpp"
#include "spinmem/spectral/density.hpp"

namespace spinmem {

using spectral::GroupLabel;

const spectral::EnsembleGroup& HybridDeviceModel::group(GroupLabel label) const {
    for (const auto& g : groups) {
        if (g.label == label) return g;
    }
    throw Error(ErrorCode::unknown_group,
                "device has no spin group " + std::string(spectral::to_string(label)));
}

void HybridDeviceModel::validate() const {
    if (!(qubit.g_q > 0.0)) throw Error(ErrorCode::invalid_parameter, "qubit coupling must be positive");
    if (!(qubit.omega_q > 0.0)) throw Error(ErrorCode::invalid_parameter, "qubit frequency must be positive");
    if (!(qubit.p_eq >= 0.0 && qubit.p_eq <= 1.0)) {
        throw Error(ErrorCode::invalid_parameter, "thermal population must lie in [0, 1]");
    }
    if (!(bus.omega_min > 0.0 && bus.omega_min < bus.omega_max)) {
        throw Error(ErrorCode::invalid_parameter, "bus tuning range must satisfy 0 < min < max");
    }
    if (!(bus.kappa >= 0.0)) throw Error(ErrorCode::invalid_parameter, "bus kappa must be >= 0");
    for (std::size_t i = 0; i < groups.size(); ++i) {
        groups[i].validate();
        for (std::size_t j = 0; j < i; ++j) {
            if (groups[i].label == groups[j].label) {
                throw Error(ErrorCode::invalid_parameter, "duplicate spin group label");
            }
        }
    }
}

spectral::EnsembleGroup make_hyperfine_group(const GroupSpec& spec, double hf_splitting,
                                             double gamma0) {
    spectral::EnsembleGroup group{spec.label, spec.g,
                                  spectral::make_hyperfine_density(spec.center, hf_splitting, spec.fwhm),
                                  gamma0};
    group.validate();
    return group;
}

HybridDeviceModel HybridDeviceModel::reference() {
    HybridDeviceModel device;
    const double split = mhz(2.3);
    device.groups = {
        make_hyperfine_group({GroupLabel::minus_I, ghz(2.84), mhz(2.9), mhz(1.6)}, split),
        make_hyperfine_group({GroupLabel::minus_III, ghz(2.865), mhz(3.8), mhz(2.4)}, split),
        make_hyperfine_group({GroupLabel::plus_III, ghz(2.89), mhz(3.8), mhz(2.4)}, split),
        make_hyperfine_group({GroupLabel::plus_I, ghz(2.91), mhz(2.9), mhz(1.6)}, split),
    };
    return device;
}

}  // namespace spinmem
