// Bus transmission and the qubit/bus anticrossing

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "spinmem/flux/aswap.hpp"
#include "spinmem/spectral/ensemble.hpp"
#include "spinmem/spectral/laplace.hpp"

namespace spinmem::analysis {

// S21 = (kappa/2) t1(-i omega) / i for a symmetric two-port with total damping
// kappa: unit magnitude on the bare resonance.
Complex transmission(const spectral::EnsembleGroup& group, const spectral::BusParams& bus, double omega);
Complex transmission(std::span<const spectral::EnsembleGroup> groups, const spectral::BusParams& bus,
                     double omega);

struct TransmissionSpectrum {
    std::vector<double> omega;   // rad/s, uniform
    std::vector<double> s21_db;  // 20 log10 |S21|
};

// Requires kappa > 0 so every sample is finite.
TransmissionSpectrum transmission_spectrum(std::span<const spectral::EnsembleGroup> groups,
                                           const spectral::BusParams& bus,
                                           const spectral::FrequencyGrid& grid);

// Normal-mode frequencies (lower, upper) of the qubit/bus pair at bus frequency omega_b.
std::pair<double, double> qubit_bus_anticrossing(const flux::QubitBusPair& pair, double omega_b);

// Separation of the two highest local maxima of |S21| on the grid, refined by
// parabolic interpolation of |S21|.
double vacuum_rabi_splitting(std::span<const spectral::EnsembleGroup> groups,
                             const spectral::BusParams& bus, const spectral::FrequencyGrid& grid);

}  // namespace spinmem::analysis
