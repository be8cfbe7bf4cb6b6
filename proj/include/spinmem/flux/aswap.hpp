// Qubit/bus adiabatic SWAP: reference schedule, two-level sweep
// simulation and the Landau-Zener estimate.

#pragma once

#include "spinmem/oracle/flux_schedule.hpp"

namespace spinmem::flux {

struct QubitBusPair {
    double omega_q{0.0};  // rad/s
    double g_q{0.0};      // rad/s
};

// 2.52 GHz -> 2.589 GHz in 60 ns -> 2.643 GHz in 350 ns -> 2.687 GHz in 40 ns.
oracle::FluxSchedule reference_aswap_schedule();

struct SweepResult {
    double transfer;    // final bus population
    double norm_drift;  // |1 - total population| at the end
};

// Integrates i d/dt (c_q, c_b) = [[0, g], [g, Delta(t)]] (c_q, c_b),
// Delta(t) = omega_B(t) - omega_Q, from the qubit excited state. dt <= 0.1 ns.
SweepResult simulate_sweep(const QubitBusPair& pair, const oracle::FluxSchedule& schedule, double dt);

// pi / (2 g_q). Throws invalid_parameter for g_q <= 0.
double resonant_swap_time(const QubitBusPair& pair);

// exp(-2 pi g^2 / rate), rate = |d Delta / dt| in rad/s^2.
double landau_zener_probability(const QubitBusPair& pair, double sweep_rate);

}  // namespace spinmem::flux
