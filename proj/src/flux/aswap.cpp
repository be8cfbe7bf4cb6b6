#include "spinmem/flux/aswap.hpp"

#include <array>
#include <cmath>

#include "spinmem/error.hpp"
#include "spinmem/units.hpp"

namespace spinmem::flux {

oracle::FluxSchedule reference_aswap_schedule() {
    return oracle::FluxSchedule(ghz(2.52), {{ghz(2.589), ns(60.0)},
                                            {ghz(2.643), ns(350.0)},
                                            {ghz(2.687), ns(40.0)}});
}

namespace {

using State = std::array<Complex, 2>;

// d/dt c = -i H(t) c with H = [[0, g], [g, Delta]]
State derivative(const State& c, double g, double delta) {
    const Complex minus_i{0.0, -1.0};
    return {minus_i * (g * c[1]), minus_i * (g * c[0] + delta * c[1])};
}

}  // namespace

SweepResult simulate_sweep(const QubitBusPair& pair, const oracle::FluxSchedule& schedule, double dt) {
    if (!(pair.g_q > 0.0)) throw Error(ErrorCode::invalid_parameter, "qubit-bus coupling must be positive");
    if (!(dt > 0.0) || dt > ns(0.1) * (1.0 + 1e-12)) {
        throw Error(ErrorCode::step_size, "sweep step must satisfy 0 < dt <= 0.1 ns");
    }
    const double duration = schedule.duration();
    State c{Complex{1.0, 0.0}, Complex{0.0, 0.0}};
    if (duration > 0.0) {
        const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(duration / dt - 1e-9)));
        const double h = duration / static_cast<double>(steps);
        auto delta = [&](double t) { return schedule.omega_at(t) - pair.omega_q; };
        for (std::size_t s = 0; s < steps; ++s) {
            const double t = h * static_cast<double>(s);
            const double d0 = delta(t), dm = delta(t + 0.5 * h), d1 = delta(t + h);
            const auto k1 = derivative(c, pair.g_q, d0);
            const auto k2 = derivative({c[0] + 0.5 * h * k1[0], c[1] + 0.5 * h * k1[1]}, pair.g_q, dm);
            const auto k3 = derivative({c[0] + 0.5 * h * k2[0], c[1] + 0.5 * h * k2[1]}, pair.g_q, dm);
            const auto k4 = derivative({c[0] + h * k3[0], c[1] + h * k3[1]}, pair.g_q, d1);
            for (int i = 0; i < 2; ++i) c[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    const double pq = std::norm(c[0]);
    const double pb = std::norm(c[1]);
    if (!std::isfinite(pq) || !std::isfinite(pb)) {
        throw Error(ErrorCode::numerical_instability, "non-finite amplitude in sweep");
    }
    return {pb, std::abs(1.0 - pq - pb)};
}

double resonant_swap_time(const QubitBusPair& pair) {
    if (!(pair.g_q > 0.0)) throw Error(ErrorCode::invalid_parameter, "qubit-bus coupling must be positive");
    return pi / (2.0 * pair.g_q);
}

double landau_zener_probability(const QubitBusPair& pair, double sweep_rate) {
    if (!(sweep_rate > 0.0)) throw Error(ErrorCode::invalid_parameter, "sweep rate must be positive");
    return std::exp(-two_pi * pair.g_q * pair.g_q / sweep_rate);
}

}  // namespace spinmem::flux
