#include "spinmem/oracle/protocols.hpp"

#include <algorithm>
#include <cmath>

#include "spinmem/error.hpp"
#include "spinmem/oracle/evolve.hpp"
#include "spinmem/parallel.hpp"

namespace spinmem::oracle {

using spectral::GroupLabel;

namespace {

void check_taus(std::span<const double> taus) {
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!(taus[i] >= 0.0)) throw Error(ErrorCode::invalid_parameter, "interaction times must be >= 0");
        if (i > 0 && taus[i] < taus[i - 1]) {
            throw Error(ErrorCode::invalid_parameter, "interaction times must be ascending");
        }
    }
}

// The configured dt is an upper bound; it is reduced when a detuned plateau
// needs finer steps.
double step_for(const DiscretizedEnsemble& ens, double bus_omega, double frame, double kappa,
                double dt_max) {
    const double rate = fastest_rate(ens, bus_omega, frame) + 0.5 * kappa;
    return std::min(dt_max, 0.05 / rate * (1.0 - 1e-9));
}

DiscretizedEnsemble discretize_group(const spectral::EnsembleGroup& group,
                                     const OracleNumerics& numerics) {
    return discretize(group, numerics.n_spins, numerics.span, group.density.mean_center());
}

// Evolves a bus photon through the ascending `taus` with a fixed bus frequency
// and reports the rotating-frame bus amplitude at each one.
std::vector<Complex> bus_trajectory(const DiscretizedEnsemble& ens, const spectral::BusParams& bus,
                                    double frame, std::span<const double> taus, double dt_max) {
    check_taus(taus);
    const double dt = step_for(ens, bus.omega_b, frame, bus.kappa, dt_max);
    auto state = StateVector::bus_photon(ens.size(), frame);
    std::vector<Complex> out;
    out.reserve(taus.size());
    double t = 0.0;
    for (double tau : taus) {
        state = evolve(state, ens, bus, tau - t, dt);
        t = tau;
        out.push_back(state.bus());
    }
    return out;
}

std::vector<double> populations(const std::vector<Complex>& amps) {
    std::vector<double> p(amps.size());
    std::transform(amps.begin(), amps.end(), p.begin(), [](Complex a) { return std::norm(a); });
    return p;
}

void check_tuning_range(const HybridDeviceModel& device, std::span<const double> omegas) {
    for (double w : omegas) {
        if (w < device.bus.omega_min || w > device.bus.omega_max) {
            throw Error(ErrorCode::out_of_range, "bus frequency outside the tuning range");
        }
    }
}

ChevronMap chevron_on(const DiscretizedEnsemble& ens, double frame, const HybridDeviceModel& device,
                      std::span<const double> omega_b_grid, std::span<const double> taus,
                      double dt_max, unsigned jobs) {
    check_tuning_range(device, omega_b_grid);
    check_taus(taus);
    ChevronMap map{{omega_b_grid.begin(), omega_b_grid.end()}, {taus.begin(), taus.end()}, {}};
    map.p.assign(omega_b_grid.size() * taus.size(), 0.0);
    parallel_for(omega_b_grid.size(), jobs, [&](std::size_t i) {
        const auto column =
            populations(bus_trajectory(ens, device.bus_at(omega_b_grid[i]), frame, taus, dt_max));
        std::copy(column.begin(), column.end(), map.p.begin() + static_cast<std::ptrdiff_t>(i * taus.size()));
    });
    return map;
}

}  // namespace

std::vector<double> storage_retrieval_protocol(const HybridDeviceModel& device, GroupLabel label,
                                               std::span<const double> taus,
                                               const OracleNumerics& numerics) {
    const auto& group = device.group(label);
    return detuned_storage_retrieval(device, label, group.density.mean_center(), taus, numerics);
}

std::vector<double> detuned_storage_retrieval(const HybridDeviceModel& device, GroupLabel label,
                                              double omega_b, std::span<const double> taus,
                                              const OracleNumerics& numerics) {
    const auto& group = device.group(label);
    const auto ens = discretize_group(group, numerics);
    const double frame = group.density.mean_center();
    return populations(bus_trajectory(ens, device.bus_at(omega_b), frame, taus, numerics.dt));
}

ChevronMap chevron_scan(const HybridDeviceModel& device, GroupLabel label,
                        std::span<const double> omega_b_grid, std::span<const double> taus,
                        const OracleNumerics& numerics, unsigned jobs) {
    const auto& group = device.group(label);
    const auto ens = discretize_group(group, numerics);
    return chevron_on(ens, group.density.mean_center(), device, omega_b_grid, taus, numerics.dt, jobs);
}

ChevronMap chevron_scan_all_groups(const HybridDeviceModel& device,
                                   std::span<const double> omega_b_grid,
                                   std::span<const double> taus, const OracleNumerics& numerics,
                                   unsigned jobs) {
    if (device.groups.empty()) throw Error(ErrorCode::invalid_parameter, "device has no spin groups");
    double lo = device.groups.front().density.mean_center();
    double hi = lo;
    for (const auto& g : device.groups) {
        lo = std::min(lo, g.density.mean_center());
        hi = std::max(hi, g.density.mean_center());
    }
    const double span = numerics.span + (hi - lo);
    // Keep the per-oscillator spacing of the single-group discretization.
    auto n = static_cast<std::size_t>(std::ceil(static_cast<double>(numerics.n_spins) * span / numerics.span));
    if (n % 2 == 0) ++n;
    const double center = 0.5 * (lo + hi);
    const auto ens = discretize(device.groups, n, span, center);
    return chevron_on(ens, center, device, omega_b_grid, taus, numerics.dt, jobs);
}

std::vector<Complex> coherence_protocol(const HybridDeviceModel& device, GroupLabel label,
                                        std::span<const double> taus,
                                        const OracleNumerics& numerics) {
    const auto& group = device.group(label);
    const auto ens = discretize_group(group, numerics);
    const double center = group.density.mean_center();
    // With the frame at the group frequency the rotating-frame amplitude is the
    // lab amplitude with the trivial rotation already removed.
    const auto alpha = bus_trajectory(ens, device.bus_at(center), center, taus, numerics.dt);
    std::vector<Complex> rho(alpha.size());
    std::transform(alpha.begin(), alpha.end(), rho.begin(),
                   [](Complex a) { return 0.5 * std::conj(a); });
    return rho;
}

std::vector<double> ramsey_protocol(const HybridDeviceModel& device, GroupLabel label, double delta,
                                    std::span<const double> taus, double tau_half_swap,
                                    const OracleNumerics& numerics) {
    check_taus(taus);
    if (!(tau_half_swap >= 0.0)) throw Error(ErrorCode::invalid_parameter, "half-swap time must be >= 0");
    const auto& group = device.group(label);
    const auto ens = discretize_group(group, numerics);
    const double center = group.density.mean_center();
    const auto resonant = device.bus_at(center);
    const auto detuned = device.bus_at(center + delta);
    const double dt_res = step_for(ens, resonant.omega_b, center, resonant.kappa, numerics.dt);
    const double dt_det = step_for(ens, detuned.omega_b, center, detuned.kappa, numerics.dt);

    auto state = evolve(StateVector::bus_photon(ens.size(), center), ens, resonant, tau_half_swap, dt_res);
    // <x_G| U_half X(tau)> = <U_half^dagger x_G | X(tau)>
    const auto probe =
        evolve_adjoint(StateVector::bus_photon(ens.size(), center), ens, resonant, tau_half_swap, dt_res);

    std::vector<double> p;
    p.reserve(taus.size());
    double t = 0.0;
    for (double tau : taus) {
        state = evolve(state, ens, detuned, tau - t, dt_det);
        t = tau;
        p.push_back(std::norm(inner_product(probe, state)));
    }
    return p;
}

double storage_time(const HybridDeviceModel& device, GroupLabel label, const OracleNumerics& numerics) {
    std::vector<double> taus;
    for (int i = 0; i <= 800; ++i) taus.push_back(ns(0.5 * i));
    const auto p = storage_retrieval_protocol(device, label, taus, numerics);
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        if (p[i] <= p[i - 1] && p[i] < p[i + 1]) {
            const double denom = p[i - 1] - 2.0 * p[i] + p[i + 1];
            const double shift = denom > 0.0 ? 0.5 * (p[i - 1] - p[i + 1]) / denom : 0.0;
            return taus[i] + shift * (taus[1] - taus[0]);
        }
    }
    throw Error(ErrorCode::numerical_instability, "no storage minimum within 400 ns");
}

}  // namespace spinmem::oracle
