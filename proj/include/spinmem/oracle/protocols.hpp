// Pulse sequences simulated on the discretized ensemble:
// storage/retrieval, chevron maps, coherence tomography and the single-photon
// Ramsey sequence with finite half-swap pulses.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spinmem/device.hpp"
#include "spinmem/oracle/discretize.hpp"
#include "spinmem/units.hpp"

namespace spinmem::oracle {

struct OracleNumerics {
    std::size_t n_spins{2401};
    double span{mhz(120.0)};  // discretization span, rad/s
    double dt{ns(0.1)};       // RK4 step, s
};

// Photon starts in the bus; the bus sits on the group's mean center for tau.
// Returns |bus amplitude|^2 at each tau (ascending, >= 0).
std::vector<double> storage_retrieval_protocol(const HybridDeviceModel& device,
                                               spectral::GroupLabel label,
                                               std::span<const double> taus,
                                               const OracleNumerics& numerics = {});

// Same sequence with the bus held at an arbitrary frequency.
std::vector<double> detuned_storage_retrieval(const HybridDeviceModel& device,
                                              spectral::GroupLabel label, double omega_b,
                                              std::span<const double> taus,
                                              const OracleNumerics& numerics = {});

struct ChevronMap {
    std::vector<double> omega_b;  // rad/s
    std::vector<double> taus;     // s
    std::vector<double> p;        // row-major: p[i_omega * taus.size() + i_tau]

    double at(std::size_t i_omega, std::size_t i_tau) const noexcept {
        return p[i_omega * taus.size() + i_tau];
    }
};

// Bus frequencies must lie inside the tuning range of the device. `jobs` > 1
// evaluates columns concurrently; the result does not depend on it.
ChevronMap chevron_scan(const HybridDeviceModel& device, spectral::GroupLabel label,
                        std::span<const double> omega_b_grid, std::span<const double> taus,
                        const OracleNumerics& numerics = {}, unsigned jobs = 1);

// All device groups coupled at once on a shared grid spanning every group.
ChevronMap chevron_scan_all_groups(const HybridDeviceModel& device,
                                   std::span<const double> omega_b_grid,
                                   std::span<const double> taus,
                                   const OracleNumerics& numerics = {}, unsigned jobs = 1);

// rho_ge(tau) of the qubit after storing/retrieving (|g> + |e>)/sqrt(2), in the
// frame rotating at the group frequency (the trivial Z rotation at
// omega_group - omega_Q removed). rho_ge(0) = 1/2.
std::vector<Complex> coherence_protocol(const HybridDeviceModel& device,
                                        spectral::GroupLabel label,
                                        std::span<const double> taus,
                                        const OracleNumerics& numerics = {});

// Resonant half swap, bus detuned by delta for tau, resonant half swap.
// Returns the final bus population for each tau.
std::vector<double> ramsey_protocol(const HybridDeviceModel& device, spectral::GroupLabel label,
                                    double delta, std::span<const double> taus,
                                    double tau_half_swap, const OracleNumerics& numerics = {});

// First local minimum of |bus|^2 for the resonant sequence (tau_s), located on a
// 0.5 ns grid and refined by parabolic interpolation.
double storage_time(const HybridDeviceModel& device, spectral::GroupLabel label,
                    const OracleNumerics& numerics = {});

}  // namespace spinmem::oracle
