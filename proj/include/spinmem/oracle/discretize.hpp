// N-oscillator quadrature of a continuous spin ensemble

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "spinmem/spectral/ensemble.hpp"

namespace spinmem::oracle {

struct DiscretizedEnsemble {
    std::vector<double> omegas;     // rad/s, strictly increasing
    std::vector<double> couplings;  // g_j, rad/s
    double gamma0{0.0};

    std::size_t size() const noexcept { return omegas.size(); }
    double total_coupling_squared() const noexcept;
};

// Uniform midpoint grid of n oscillators over [center - span/2, center + span/2].
// g_j^2 is g^2 times the density mass of cell j; the mass beyond the span goes to
// the two edge cells, so sum g_j^2 = g^2.
// n == 1 collapses the ensemble to a single oscillator at the mean center.
// The center defaults to the density's mean center.
DiscretizedEnsemble discretize(const spectral::EnsembleGroup& group, std::size_t n, double span,
                               std::optional<double> center = std::nullopt);

// Several groups on one shared grid: g_j^2 = sum_K g_K^2 * mass_K(cell j), each
// group summing to its own g_K^2. Groups must share gamma0.
DiscretizedEnsemble discretize(std::span<const spectral::EnsembleGroup> groups, std::size_t n,
                               double span, double center);

// Collective mode x_S = (1/g) sum_j g_j e_j over the spin coordinates.
std::vector<double> collective_mode(const DiscretizedEnsemble& ensemble);

}  // namespace spinmem::oracle
