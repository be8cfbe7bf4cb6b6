// Spin groups, bus parameters, memory kernel and the Laplace-domain
// transfer functions of the bus/ensemble effective Hamiltonian.
//
// All transfer functions are evaluated at s = -i*omega. `omega` may be complex:
// omega = w + i*sigma corresponds to the Bromwich line Re(s) = sigma.

#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "spinmem/spectral/density.hpp"
#include "spinmem/units.hpp"

namespace spinmem::spectral {

enum class GroupLabel { minus_I, plus_I, minus_III, plus_III };

std::string_view to_string(GroupLabel label) noexcept;
// Accepts "-I", "+I", "-III", "+III" (also "minus_I" style spellings).
std::optional<GroupLabel> parse_group_label(std::string_view text) noexcept;

struct EnsembleGroup {
    GroupLabel label{GroupLabel::minus_I};
    double g{0.0};        // collective coupling, rad/s
    SpinDensity density;  // normalized
    double gamma0{0.0};   // single-spin emission rate, rad/s

    // Throws invalid_parameter unless g >= 0 and gamma0 >= 0. A zero coupling is
    // accepted so the decoupled limit can be evaluated.
    void validate() const;
};

struct BusParams {
    double omega_b{0.0};  // rad/s
    double kappa{0.0};    // energy decay rate, rad/s

    Complex complex_frequency() const noexcept { return {omega_b, -0.5 * kappa}; }
    void validate() const;
};

// W(omega) / g^2 = sum_k w_k / (omega - omega_k + i(Gamma_k + gamma0)/2)
Complex normalized_kernel(const EnsembleGroup& group, Complex omega) noexcept;

// W(omega) = g^2 * integral rho(w') dw' / (omega - w' + i gamma0/2), closed form
// for Lorentzian densities.
Complex memory_kernel(const EnsembleGroup& group, Complex omega) noexcept;
Complex memory_kernel(std::span<const EnsembleGroup> groups, Complex omega) noexcept;

// Bus-bus element: t1(-i omega) = i / (omega - omega_B + i kappa/2 - W(omega)).
Complex transfer_t1(const EnsembleGroup& group, const BusParams& bus, Complex omega) noexcept;
Complex transfer_t1(std::span<const EnsembleGroup> groups, const BusParams& bus,
                    Complex omega) noexcept;

// Collective-mode elements from block elimination of the arrow-shaped H_eff:
//   t2 = x_S^T R x_S = t1 * W * (omega - omega~_B) / g^2
//   t3 = x_S^T R x_G = -i t1 W / g
//   t4 = x_G^T R x_S = -t3
// with R = (s + i H_eff)^-1. Both t2 and t3 have finite g -> 0 limits.
Complex transfer_t2(const EnsembleGroup& group, const BusParams& bus, Complex omega) noexcept;
Complex transfer_t3(const EnsembleGroup& group, const BusParams& bus, Complex omega) noexcept;
Complex transfer_t4(const EnsembleGroup& group, const BusParams& bus, Complex omega) noexcept;

}  // namespace spinmem::spectral
