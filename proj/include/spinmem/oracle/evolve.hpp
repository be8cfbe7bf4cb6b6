// Fixed-step RK4 integration of dX/dt = -i H_eff X for the bus plus
// N spin oscillators.
//
// H_eff is arrow shaped: H_00 = omega_B - i kappa/2, H_jj = omega_j - i gamma0/2,
// H_0j = i g_j, H_j0 = -i g_j. Integration happens in a frame rotating at
// `StateVector::frame`; lab amplitudes carry an extra exp(-i frame t).

#pragma once

#include <cstddef>
#include <vector>

#include "spinmem/oracle/discretize.hpp"
#include "spinmem/oracle/flux_schedule.hpp"
#include "spinmem/spectral/ensemble.hpp"
#include "spinmem/units.hpp"

namespace spinmem::oracle {

struct StateVector {
    std::vector<Complex> amplitudes;  // [bus, spin_1 ... spin_N], rotating frame
    double frame{0.0};                // rad/s
    double time{0.0};                 // s

    // Photon in the bus, spins in their ground state.
    static StateVector bus_photon(std::size_t n_spins, double frame);
    // Single excitation in the collective spin mode.
    static StateVector collective_excitation(const DiscretizedEnsemble& ensemble, double frame);

    Complex bus() const noexcept { return amplitudes.front(); }
    Complex lab_amplitude(std::size_t i) const noexcept;
    double bus_population() const noexcept { return std::norm(amplitudes.front()); }
    double norm_squared() const noexcept;
};

// Largest rotating-frame rate the step has to resolve.
double fastest_rate(const DiscretizedEnsemble& ensemble, double bus_omega, double frame) noexcept;

// dt must satisfy dt * fastest_rate <= 0.05 (step-size error otherwise). The
// duration is split into ceil(duration/dt) equal steps.
StateVector evolve(const StateVector& state, const DiscretizedEnsemble& ensemble,
                   const spectral::BusParams& bus, double duration, double dt);

// Time-dependent bus frequency following `schedule` from its start to its end.
StateVector evolve(const StateVector& state, const DiscretizedEnsemble& ensemble,
                   const FluxSchedule& schedule, double kappa, double dt);

// Applies the exact adjoint of the discrete propagator used by `evolve` for the
// same (duration, dt). Used to project onto a state propagated by a later,
// fixed pulse without re-integrating it for every sweep point.
StateVector evolve_adjoint(const StateVector& state, const DiscretizedEnsemble& ensemble,
                           const spectral::BusParams& bus, double duration, double dt);

inline Complex inner_product(const StateVector& a, const StateVector& b) noexcept {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) acc += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    return acc;
}

}  // namespace spinmem::oracle
