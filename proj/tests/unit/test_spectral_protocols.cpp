#include "doctest.h"

#include <cmath>
#include <vector>

#include "reference.hpp"
#include "spinmem/device.hpp"
#include "spinmem/oracle/discretize.hpp"
#include "spinmem/oracle/evolve.hpp"
#include "spinmem/spectral/protocols.hpp"

using namespace spinmem;
using namespace spinmem::spectral;

namespace {

constexpr Complex I{0.0, 1.0};

std::vector<double> time_grid(double step, int n) {
    std::vector<double> t;
    for (int k = 0; k < n; ++k) t.push_back(step * k);
    return t;
}

}  // namespace

TEST_CASE("bare resonator decays exponentially") {
    const EnsembleGroup group{GroupLabel::minus_I, 0.0, make_single_line(ghz(2.84), mhz(1.0)), 0.0};
    const BusParams bus{ghz(2.84), 1.0 / us(1.5)};
    const auto t = time_grid(ns(5.0), 200);
    const auto p = rabi_protocol(group, bus, t);
    for (std::size_t k = 0; k < t.size(); ++k) CHECK(p[k] == doctest::Approx(std::exp(-bus.kappa * t[k])).epsilon(1e-6));
}

TEST_CASE("uncoupled lossless bus keeps its photon") {
    const EnsembleGroup group{GroupLabel::minus_I, 0.0, make_single_line(ghz(2.84), mhz(1.0)), 0.0};
    const auto p = rabi_protocol(group, {ghz(2.84), 0.0}, time_grid(ns(2.5), 200));
    for (double v : p) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("zero-linewidth line gives cos^2(g t)") {
    const double g = mhz(3.8);
    const EnsembleGroup group{GroupLabel::minus_III, g, make_single_line(ghz(2.865), khz(0.5)), 0.0};
    const BusParams bus{ghz(2.865), 0.0};
    const auto t = time_grid(ns(0.5), 1001);
    const auto p = rabi_protocol(group, bus, t);
    double worst = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) worst = std::max(worst, std::abs(p[k] - std::pow(std::cos(g * t[k]), 2)));
    CHECK(worst < 1e-3);
    const std::vector<double> swap{pi / (2.0 * g)};
    CHECK(rabi_protocol(group, bus, swap)[0] < 1e-3);
}

TEST_CASE("initial value and bounds") {
    const auto dev = HybridDeviceModel::reference();
    for (const auto& group : dev.groups) {
        const auto bus = dev.bus_at(group.density.mean_center());
        const auto t = time_grid(ns(0.5), 1001);
        const auto alpha = bus_amplitude(group, bus, t);
        CHECK(std::abs(alpha[0] - 1.0) < 1e-3);
        for (const auto& a : alpha) {
            CHECK(std::norm(a) <= 1.0 + 1e-6);
        }
    }
}

TEST_CASE("triplet dynamics match the discretized ensemble") {
    const auto dev = HybridDeviceModel::reference();
    const auto& group = dev.group(GroupLabel::minus_III);
    const double center = group.density.mean_center();
    const auto ens = oracle::discretize(group, 2401, mhz(120.0));
    const auto t = time_grid(ns(5.0), 101);

    const auto bus = dev.bus_at(center);
    const auto p = rabi_protocol(group, bus, t);
    auto x = oracle::StateVector::bus_photon(ens.size(), center);
    double worst_p = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (k > 0) x = oracle::evolve(x, ens, bus, t[k] - t[k - 1], ns(0.1));
        worst_p = std::max(worst_p, std::abs(p[k] - x.bus_population()));
    }
    CHECK(worst_p < 1e-3);

    // alpha = 1/2 (x_G + x_S)^T U (x_G - x_S) with the bus detuned by 38 MHz.
    const auto detuned = dev.bus_at(center + mhz(38.0));
    const auto ramsey = ramsey_spectral(group, detuned, t);
    // The S-S element sees the Lorentzian tails directly; use a wider span.
    const auto wide = oracle::discretize(group, 4001, mhz(400.0));
    const auto xs = oracle::StateVector::collective_excitation(wide, center);
    auto y = oracle::StateVector::bus_photon(wide.size(), center);
    for (std::size_t i = 0; i < y.amplitudes.size(); ++i) y.amplitudes[i] -= xs.amplitudes[i];
    auto probe = oracle::StateVector::bus_photon(wide.size(), center);
    for (std::size_t i = 0; i < probe.amplitudes.size(); ++i) probe.amplitudes[i] += xs.amplitudes[i];
    double worst_r = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (k > 0) y = oracle::evolve(y, wide, detuned, t[k] - t[k - 1], ns(0.02));
        // Rotating-frame amplitudes carry exp(+i center t) relative to the lab frame.
        const Complex r = 0.5 * oracle::inner_product(probe, y) * std::exp(-I * center * t[k]);
        worst_r = std::max(worst_r, std::abs(ramsey[k] - r));
    }
    // The edge cells carry the folded tails (fwhm / (pi * span) of the weight)
    // and ring for the whole trace; the residual halves when the span doubles.
    CHECK(worst_r < 2.5e-3);
}

TEST_CASE("Ramsey with a decoupled lossless line interferes at the detuning") {
    const double delta = mhz(38.0);
    const EnsembleGroup group{GroupLabel::minus_I, 0.0, make_single_line(ghz(2.84), khz(0.5)), 0.0};
    const BusParams bus{ghz(2.84) + delta, 0.0};
    const auto t = time_grid(ns(2.5), 300);
    const auto a = ramsey_spectral(group, bus, t);
    for (std::size_t k = 0; k < t.size(); ++k) {
        const Complex expected = 0.5 * (std::exp(-I * bus.omega_b * t[k]) - std::exp(-I * ghz(2.84) * t[k]));
        CHECK(std::abs(a[k] - expected) < 1e-3);
    }
}
