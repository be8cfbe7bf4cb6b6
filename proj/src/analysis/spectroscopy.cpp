#include "spinmem/analysis/spectroscopy.hpp"

#include <algorithm>
#include <cmath>

#include "spinmem/analysis/series.hpp"
#include "spinmem/error.hpp"

namespace spinmem::analysis {

namespace {

constexpr Complex I{0.0, 1.0};

}  // namespace

Complex transmission(const spectral::EnsembleGroup& group, const spectral::BusParams& bus, double omega) {
    return transmission(std::span<const spectral::EnsembleGroup>(&group, 1), bus, omega);
}

Complex transmission(std::span<const spectral::EnsembleGroup> groups, const spectral::BusParams& bus,
                     double omega) {
    return 0.5 * bus.kappa * spectral::transfer_t1(groups, bus, Complex{omega, 0.0}) / I;
}

TransmissionSpectrum transmission_spectrum(std::span<const spectral::EnsembleGroup> groups,
                                           const spectral::BusParams& bus,
                                           const spectral::FrequencyGrid& grid) {
    bus.validate();
    grid.validate();
    if (!(bus.kappa > 0.0)) throw Error(ErrorCode::invalid_parameter, "transmission needs a damped bus");
    TransmissionSpectrum out;
    out.omega.resize(grid.size);
    out.s21_db.resize(grid.size);
    for (std::size_t i = 0; i < grid.size; ++i) {
        out.omega[i] = grid.at(i);
        out.s21_db[i] = 20.0 * std::log10(std::abs(transmission(groups, bus, out.omega[i])));
    }
    return out;
}

std::pair<double, double> qubit_bus_anticrossing(const flux::QubitBusPair& pair, double omega_b) {
    const double mean = 0.5 * (pair.omega_q + omega_b);
    const double half_delta = 0.5 * (omega_b - pair.omega_q);
    const double r = std::hypot(half_delta, pair.g_q);
    return {mean - r, mean + r};
}

double vacuum_rabi_splitting(std::span<const spectral::EnsembleGroup> groups, const spectral::BusParams& bus,
                             const spectral::FrequencyGrid& grid) {
    grid.validate();
    std::vector<double> x(grid.size), y(grid.size);
    for (std::size_t i = 0; i < grid.size; ++i) {
        x[i] = grid.at(i);
        y[i] = std::abs(spectral::transfer_t1(groups, bus, Complex{x[i], 0.0}));
    }
    auto maxima = local_maxima(x, y);
    if (maxima.size() < 2) throw Error(ErrorCode::numerical_instability, "fewer than two transmission maxima");
    std::partial_sort(maxima.begin(), maxima.begin() + 2, maxima.end(),
                      [](const Extremum& a, const Extremum& b) { return a.y > b.y; });
    return std::abs(maxima[0].x - maxima[1].x);
}

}  // namespace spinmem::analysis
