#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "reference.hpp"
#include "spinmem/device.hpp"
#include "spinmem/error.hpp"
#include "spinmem/oracle/discretize.hpp"
#include "spinmem/oracle/evolve.hpp"
#include "spinmem/oracle/flux_schedule.hpp"
#include "spinmem/oracle/protocols.hpp"
#include "spinmem/spectral/protocols.hpp"

using namespace spinmem;
using namespace spinmem::oracle;
using spectral::GroupLabel;

namespace {

spectral::EnsembleGroup triplet_I() {
    return make_hyperfine_group({GroupLabel::minus_I, ghz(2.84), mhz(2.9), mhz(1.6)}, mhz(2.3));
}

std::vector<double> time_grid(double step, int n) {
    std::vector<double> t;
    for (int k = 0; k < n; ++k) t.push_back(step * k);
    return t;
}

HybridDeviceModel lossless_device() {
    auto dev = HybridDeviceModel::reference();
    dev.bus.kappa = 0.0;
    return dev;
}

}  // namespace

TEST_CASE("discretization conserves the total coupling") {
    const auto ens = discretize(triplet_I(), 2001, mhz(80.0));
    CHECK(ens.size() == 2001);
    CHECK(ens.total_coupling_squared() == doctest::Approx(mhz(2.9) * mhz(2.9)).epsilon(1e-14));
    for (std::size_t j = 1; j < ens.size(); ++j) CHECK(ens.omegas[j] > ens.omegas[j - 1]);
    const auto x = collective_mode(ens);
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    CHECK(n2 == doctest::Approx(1.0));
}

TEST_CASE("discretization errors") {
    const auto g = triplet_I();
    for (std::size_t n : {0u, 2u}) {
        try {
            (void)discretize(g, n, mhz(80.0));
            FAIL("bad oscillator count accepted");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::invalid_parameter);
        }
    }
    try {
        (void)discretize(g, 2001, mhz(20.0));
        FAIL("narrow span accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::coverage);
    }
    const auto single = discretize(g, 1, mhz(80.0));
    REQUIRE(single.size() == 1);
    CHECK(single.couplings[0] == doctest::Approx(mhz(2.9)));
}

TEST_CASE("discretization convergence") {
    auto dev = lossless_device();
    const auto taus = time_grid(ns(2.0), 251);
    const auto coarse = storage_retrieval_protocol(dev, GroupLabel::minus_I, taus, {1001, mhz(80.0), ns(0.1)});
    const auto fine = storage_retrieval_protocol(dev, GroupLabel::minus_I, taus, {4001, mhz(80.0), ns(0.1)});
    double worst = 0.0;
    for (std::size_t k = 0; k < taus.size(); ++k) worst = std::max(worst, std::abs(coarse[k] - fine[k]));
    CHECK(worst < 5e-4);
}

TEST_CASE("norm conservation without loss") {
    const auto ens = discretize(triplet_I(), 2001, mhz(80.0));
    const spectral::BusParams bus{ghz(2.84), 0.0};
    auto state = StateVector::bus_photon(ens.size(), ghz(2.84));
    state = evolve(state, ens, bus, us(1.0), ns(0.1));
    CHECK(std::abs(state.norm_squared() - 1.0) < 1e-9);
}

TEST_CASE("bare damped bus decays as exp(-kappa t)") {
    auto g = triplet_I();
    g.g = 0.0;
    const auto ens = discretize(g, 101, mhz(80.0));
    const spectral::BusParams bus{ghz(2.84), 1.0 / us(1.5)};
    auto state = StateVector::bus_photon(ens.size(), ghz(2.84));
    double t = 0.0;
    for (int k = 0; k < 20; ++k) {
        state = evolve(state, ens, bus, ns(50.0), ns(0.1));
        t += ns(50.0);
        CHECK(std::abs(state.bus_population() - std::exp(-bus.kappa * t)) < 1e-6);
    }
}

TEST_CASE("evolution is linear") {
    const auto ens = discretize(triplet_I(), 301, mhz(80.0));
    const spectral::BusParams bus{ghz(2.841), 1.0 / us(1.5)};
    std::mt19937 rng(7);
    std::normal_distribution<double> n01;
    auto random_state = [&] {
        StateVector s{std::vector<Complex>(ens.size() + 1), ghz(2.84), 0.0};
        for (auto& a : s.amplitudes) a = {n01(rng), n01(rng)};
        return s;
    };
    const auto x1 = random_state(), x2 = random_state();
    const Complex a{0.3, -1.2}, b{2.0, 0.5};
    StateVector mix = x1;
    for (std::size_t i = 0; i < mix.amplitudes.size(); ++i) mix.amplitudes[i] = a * x1.amplitudes[i] + b * x2.amplitudes[i];
    const auto y1 = evolve(x1, ens, bus, ns(200.0), ns(0.1));
    const auto y2 = evolve(x2, ens, bus, ns(200.0), ns(0.1));
    const auto ym = evolve(mix, ens, bus, ns(200.0), ns(0.1));
    double worst = 0.0;
    for (std::size_t i = 0; i < ym.amplitudes.size(); ++i) {
        worst = std::max(worst, std::abs(ym.amplitudes[i] - (a * y1.amplitudes[i] + b * y2.amplitudes[i])));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("RK4 matches the exact propagator") {
    const auto ens = discretize(triplet_I(), 201, mhz(80.0));
    const spectral::BusParams bus{ghz(2.842), 1.0 / us(1.5)};
    const double frame = ghz(2.84);
    const auto h = ref::hamiltonian(ens, bus);
    const ref::Propagator u(h);
    const auto x0 = ref::bus_vector(h.rows());
    auto state = StateVector::bus_photon(ens.size(), frame);
    state = evolve(state, ens, bus, ns(150.0), ns(0.05));
    const auto exact = u.apply(x0, ns(150.0));
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        CHECK(std::abs(state.lab_amplitude(i) - exact(static_cast<Eigen::Index>(i))) < 1e-6);
    }
}

TEST_CASE("step size check") {
    const auto ens = discretize(triplet_I(), 201, mhz(80.0));
    const spectral::BusParams bus{ghz(2.84), 0.0};
    auto state = StateVector::bus_photon(ens.size(), ghz(2.84));
    try {
        (void)evolve(state, ens, bus, ns(10.0), ns(5.0));
        FAIL("coarse step accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::step_size);
    }
}

TEST_CASE("adjoint propagation is the inverse for a lossless generator") {
    const auto ens = discretize(triplet_I(), 201, mhz(80.0));
    const spectral::BusParams bus{ghz(2.84), 0.0};
    const auto a = StateVector::bus_photon(ens.size(), ghz(2.84));
    const auto b = StateVector::collective_excitation(ens, ghz(2.84));
    const auto ua = evolve(a, ens, bus, ns(40.0), ns(0.1));
    const auto udb = evolve_adjoint(b, ens, bus, ns(40.0), ns(0.1));
    // <b|U a> = <U^dagger b|a>
    CHECK(std::abs(inner_product(b, ua) - inner_product(udb, a)) < 1e-12);
}

TEST_CASE("flux schedules") {
    const FluxSchedule s(ghz(2.52), {{ghz(2.589), ns(60.0)}, {ghz(2.643), ns(350.0)}, {ghz(2.687), ns(40.0)}});
    CHECK(s.duration() == doctest::Approx(ns(450.0)));
    CHECK(s.final_frequency() == doctest::Approx(ghz(2.687)));
    CHECK(s.omega_at(ns(30.0)) == doctest::Approx(ghz(2.5545)));
    CHECK(s.omega_at(-1.0) == doctest::Approx(ghz(2.52)));
    CHECK(s.omega_at(1.0) == doctest::Approx(ghz(2.687)));
    CHECK(s.slope_at(ns(100.0)) == doctest::Approx((ghz(2.643) - ghz(2.589)) / ns(350.0)));
    CHECK(s.sped_up(10.0).duration() == doctest::Approx(ns(45.0)));
    CHECK_THROWS_AS(s.check_range(ghz(2.5), ghz(2.6)), Error);
    CHECK_NOTHROW(s.check_range(ghz(2.5), ghz(3.004)));
    CHECK_THROWS_AS(FluxSchedule(1.0, {{2.0, 0.0}}), Error);
}

TEST_CASE("constant schedule equals fixed-bus evolution") {
    const auto ens = discretize(triplet_I(), 201, mhz(80.0));
    const FluxSchedule flat(ghz(2.841), {{ghz(2.841), ns(80.0)}});
    const auto s0 = StateVector::bus_photon(ens.size(), ghz(2.84));
    const auto a = evolve(s0, ens, flat, 1.0 / us(1.5), ns(0.1));
    const auto b = evolve(s0, ens, spectral::BusParams{ghz(2.841), 1.0 / us(1.5)}, ns(80.0), ns(0.1));
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) CHECK(std::abs(a.amplitudes[i] - b.amplitudes[i]) < 1e-12);
}

TEST_CASE("oracle and spectral storage/retrieval agree") {
    const auto dev = HybridDeviceModel::reference();
    const auto taus = time_grid(ns(2.5), 201);
    for (auto label : {GroupLabel::minus_I, GroupLabel::minus_III}) {
        const auto& g = dev.group(label);
        const auto spectral_p = spectral::rabi_protocol(g, dev.bus_at(g.density.mean_center()), taus);
        const auto oracle_p = storage_retrieval_protocol(dev, label, taus);
        double worst = 0.0;
        for (std::size_t k = 0; k < taus.size(); ++k) worst = std::max(worst, std::abs(spectral_p[k] - oracle_p[k]));
        CHECK(worst < 1e-3);
    }
}

TEST_CASE("chevron does not depend on the job count") {
    const auto dev = HybridDeviceModel::reference();
    const std::vector<double> omegas{ghz(2.835), ghz(2.84), ghz(2.845)};
    const auto taus = time_grid(ns(10.0), 20);
    const OracleNumerics num{601, mhz(80.0), ns(0.1)};
    const auto one = chevron_scan(dev, GroupLabel::minus_I, omegas, taus, num, 1);
    const auto three = chevron_scan(dev, GroupLabel::minus_I, omegas, taus, num, 3);
    CHECK(one.p == three.p);
    // The resonant column matches the plain storage/retrieval sequence.
    const auto resonant = storage_retrieval_protocol(dev, GroupLabel::minus_I, taus, num);
    for (std::size_t k = 0; k < taus.size(); ++k) CHECK(one.at(1, k) == doctest::Approx(resonant[k]).epsilon(1e-12));
    const std::vector<double> outside{ghz(3.1)};
    try {
        (void)chevron_scan(dev, GroupLabel::minus_I, outside, taus, num);
        FAIL("out-of-range bus frequency accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::out_of_range);
    }
}

TEST_CASE("coherence starts at one half and vanishes at the storage time") {
    const auto dev = HybridDeviceModel::reference();
    const double ts = storage_time(dev, GroupLabel::minus_I);
    const std::vector<double> taus{0.0, ts};
    const auto rho = coherence_protocol(dev, GroupLabel::minus_I, taus);
    CHECK(std::abs(rho[0] - 0.5) < 1e-12);
    CHECK(std::abs(rho[1]) < 0.05 * 0.5);
}

TEST_CASE("single-mode Ramsey has unit visibility") {
    auto dev = lossless_device();
    const double g = mhz(2.9);
    dev.groups = {spectral::EnsembleGroup{GroupLabel::minus_I, g, spectral::make_single_line(ghz(2.84), khz(1.0)), 0.0}};
    const OracleNumerics num{1, mhz(80.0), ns(0.05)};
    const double delta = mhz(38.0);
    const auto taus = time_grid(ns(0.5), 400);
    const auto p = ramsey_protocol(dev, GroupLabel::minus_I, delta, taus, pi / (4.0 * g), num);
    const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
    CHECK(*hi > 0.999);
    CHECK(*lo < 1e-3);
}
