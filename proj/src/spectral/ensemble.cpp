#include "spinmem/spectral/ensemble.hpp"

#include <cmath>

#include "spinmem/error.hpp"

namespace spinmem::spectral {

namespace {
constexpr Complex I{0.0, 1.0};
}

std::string_view to_string(GroupLabel label) noexcept {
    switch (label) {
        case GroupLabel::minus_I: return "-I";
        case GroupLabel::plus_I: return "+I";
        case GroupLabel::minus_III: return "-III";
        case GroupLabel::plus_III: return "+III";
    }
    return "?";
}

std::optional<GroupLabel> parse_group_label(std::string_view text) noexcept {
    if (text == "-I" || text == "minus_I" || text == "−I") return GroupLabel::minus_I;
    if (text == "+I" || text == "plus_I") return GroupLabel::plus_I;
    if (text == "-III" || text == "minus_III" || text == "−III") return GroupLabel::minus_III;
    if (text == "+III" || text == "plus_III") return GroupLabel::plus_III;
    return std::nullopt;
}

void EnsembleGroup::validate() const {
    if (!(g >= 0.0) || !std::isfinite(g)) {
        throw Error(ErrorCode::invalid_parameter, "ensemble coupling g must be >= 0");
    }
    if (!(gamma0 >= 0.0) || !std::isfinite(gamma0)) {
        throw Error(ErrorCode::invalid_parameter, "gamma0 must be >= 0");
    }
}

void BusParams::validate() const {
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
        throw Error(ErrorCode::invalid_parameter, "bus kappa must be >= 0");
    }
    if (!std::isfinite(omega_b)) {
        throw Error(ErrorCode::invalid_parameter, "bus frequency must be finite");
    }
}

Complex normalized_kernel(const EnsembleGroup& group, Complex omega) noexcept {
    Complex k{0.0, 0.0};
    for (const auto& c : group.density.components()) {
        k += c.weight / (omega - c.center + I * (0.5 * c.fwhm + 0.5 * group.gamma0));
    }
    return k;
}

Complex memory_kernel(const EnsembleGroup& group, Complex omega) noexcept {
    return group.g * group.g * normalized_kernel(group, omega);
}

Complex memory_kernel(std::span<const EnsembleGroup> groups, Complex omega) noexcept {
    Complex w{0.0, 0.0};
    for (const auto& group : groups) w += memory_kernel(group, omega);
    return w;
}

namespace {

Complex bus_denominator(const BusParams& bus, Complex omega) noexcept {
    return omega - bus.complex_frequency();
}

}  // namespace

Complex transfer_t1(const EnsembleGroup& group, const BusParams& bus, Complex omega) noexcept {
    return I / (bus_denominator(bus, omega) - memory_kernel(group, omega));
}

Complex transfer_t1(std::span<const EnsembleGroup> groups, const BusParams& bus,
                    Complex omega) noexcept {
    return I / (bus_denominator(bus, omega) - memory_kernel(groups, omega));
}

Complex transfer_t2(const EnsembleGroup& group, const BusParams& bus, Complex omega) noexcept {
    // i K A / (A - g^2 K) with K = W/g^2 and A = omega - omega~_B.
    const Complex k = normalized_kernel(group, omega);
    const Complex a = bus_denominator(bus, omega);
    return I * k * a / (a - group.g * group.g * k);
}

Complex transfer_t3(const EnsembleGroup& group, const BusParams& bus, Complex omega) noexcept {
    const Complex k = normalized_kernel(group, omega);
    const Complex a = bus_denominator(bus, omega);
    return group.g * k / (a - group.g * group.g * k);
}

Complex transfer_t4(const EnsembleGroup& group, const BusParams& bus, Complex omega) noexcept {
    return -transfer_t3(group, bus, omega);
}

}  // namespace spinmem::spectral
