#include "spinmem/oracle/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinmem/error.hpp"

namespace spinmem::oracle {

namespace {

constexpr double max_phase_per_step = 0.05;

// Explicit arithmetic keeps the inner loops free of the NaN-recovery path of
// std::complex multiplication.
inline Complex mul(Complex a, Complex b) noexcept {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// Linear generator f(y) of the arrow system:
//   f_0 = d_0 y_0 + sign * sum_j g_j y_j
//   f_j = d_j y_j - sign * g_j y_0
// Forward propagation uses d = -i(omega~ - frame), sign = +1; the adjoint uses
// conj(d) and sign = -1.
struct ArrowGenerator {
    Complex bus_diag;
    std::vector<Complex> spin_diag;
    const std::vector<double>* couplings;
    double sign;

    void apply(const std::vector<Complex>& y, std::vector<Complex>& out) const noexcept {
        const std::size_t n = spin_diag.size();
        const auto& g = *couplings;
        const Complex y0 = y[0];
        double sr = 0.0, si = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const Complex yj = y[j + 1];
            sr += g[j] * yj.real();
            si += g[j] * yj.imag();
            const Complex d = mul(spin_diag[j], yj);
            out[j + 1] = {d.real() - sign * g[j] * y0.real(), d.imag() - sign * g[j] * y0.imag()};
        }
        const Complex d0 = mul(bus_diag, y0);
        out[0] = {d0.real() + sign * sr, d0.imag() + sign * si};
    }
};

ArrowGenerator make_generator(const DiscretizedEnsemble& ens, double bus_omega, double kappa,
                              double frame, bool adjoint) {
    const Complex minus_i{0.0, -1.0};
    ArrowGenerator gen;
    gen.couplings = &ens.couplings;
    gen.sign = adjoint ? -1.0 : 1.0;
    gen.bus_diag = minus_i * Complex{bus_omega - frame, -0.5 * kappa};
    gen.spin_diag.resize(ens.size());
    for (std::size_t j = 0; j < ens.size(); ++j) {
        gen.spin_diag[j] = minus_i * Complex{ens.omegas[j] - frame, -0.5 * ens.gamma0};
    }
    if (adjoint) {
        gen.bus_diag = std::conj(gen.bus_diag);
        for (auto& d : gen.spin_diag) d = std::conj(d);
    }
    return gen;
}

struct Rk4Workspace {
    std::vector<Complex> k1, k2, k3, k4, tmp;
    explicit Rk4Workspace(std::size_t n) : k1(n), k2(n), k3(n), k4(n), tmp(n) {}
};

inline void axpy_into(std::vector<Complex>& out, const std::vector<Complex>& y, double a,
                      const std::vector<Complex>& k) noexcept {
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = {y[i].real() + a * k[i].real(), y[i].imag() + a * k[i].imag()};
    }
}

// One classical RK4 step with possibly distinct generators at t, t + h/2, t + h.
void rk4_step(std::vector<Complex>& y, double h, const ArrowGenerator& g_start,
              const ArrowGenerator& g_mid, const ArrowGenerator& g_end, Rk4Workspace& w) noexcept {
    g_start.apply(y, w.k1);
    axpy_into(w.tmp, y, 0.5 * h, w.k1);
    g_mid.apply(w.tmp, w.k2);
    axpy_into(w.tmp, y, 0.5 * h, w.k2);
    g_mid.apply(w.tmp, w.k3);
    axpy_into(w.tmp, y, h, w.k3);
    g_end.apply(w.tmp, w.k4);
    const double c = h / 6.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double re = w.k1[i].real() + 2.0 * w.k2[i].real() + 2.0 * w.k3[i].real() + w.k4[i].real();
        const double im = w.k1[i].imag() + 2.0 * w.k2[i].imag() + 2.0 * w.k3[i].imag() + w.k4[i].imag();
        y[i] = {y[i].real() + c * re, y[i].imag() + c * im};
    }
}

void check_state(const StateVector& state, const DiscretizedEnsemble& ens) {
    if (state.amplitudes.size() != ens.size() + 1) {
        throw Error(ErrorCode::invalid_parameter, "state size does not match the ensemble");
    }
}

void check_finite(const std::vector<Complex>& y) {
    for (const auto& a : y) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw Error(ErrorCode::numerical_instability, "non-finite amplitude during evolution");
        }
    }
}

void check_dt(double dt, double rate) {
    if (!(dt > 0.0)) throw Error(ErrorCode::step_size, "time step must be positive");
    if (dt * rate > max_phase_per_step * (1.0 + 1e-12)) {
        throw Error(ErrorCode::step_size,
                    "time step " + std::to_string(dt) + " s too coarse; need dt <= " +
                        std::to_string(max_phase_per_step / rate) + " s");
    }
}

std::size_t step_count(double duration, double dt) {
    return static_cast<std::size_t>(std::max(1.0, std::ceil(duration / dt - 1e-9)));
}

StateVector evolve_constant(const StateVector& state, const DiscretizedEnsemble& ens,
                            const spectral::BusParams& bus, double duration, double dt,
                            bool adjoint) {
    check_state(state, ens);
    bus.validate();
    if (!(duration >= 0.0)) throw Error(ErrorCode::invalid_parameter, "duration must be >= 0");
    check_dt(dt, fastest_rate(ens, bus.omega_b, state.frame) + 0.5 * bus.kappa);
    StateVector out = state;
    if (duration == 0.0) return out;
    const auto gen = make_generator(ens, bus.omega_b, bus.kappa, state.frame, adjoint);
    const std::size_t steps = step_count(duration, dt);
    const double h = duration / static_cast<double>(steps);
    Rk4Workspace work(out.amplitudes.size());
    for (std::size_t s = 0; s < steps; ++s) {
        rk4_step(out.amplitudes, h, gen, gen, gen, work);
        if ((s & 1023u) == 1023u) check_finite(out.amplitudes);
    }
    check_finite(out.amplitudes);
    out.time += adjoint ? -duration : duration;
    return out;
}

}  // namespace

StateVector StateVector::bus_photon(std::size_t n_spins, double frame) {
    StateVector s;
    s.amplitudes.assign(n_spins + 1, Complex{0.0, 0.0});
    s.amplitudes[0] = 1.0;
    s.frame = frame;
    return s;
}

StateVector StateVector::collective_excitation(const DiscretizedEnsemble& ensemble, double frame) {
    const auto x = collective_mode(ensemble);
    StateVector s;
    s.amplitudes.assign(ensemble.size() + 1, Complex{0.0, 0.0});
    for (std::size_t j = 0; j < x.size(); ++j) s.amplitudes[j + 1] = x[j];
    s.frame = frame;
    return s;
}

Complex StateVector::lab_amplitude(std::size_t i) const noexcept {
    return amplitudes[i] * std::polar(1.0, -frame * time);
}

double StateVector::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return s;
}

double fastest_rate(const DiscretizedEnsemble& ensemble, double bus_omega, double frame) noexcept {
    double rate = std::abs(bus_omega - frame);
    for (double w : ensemble.omegas) rate = std::max(rate, std::abs(w - frame));
    rate = std::max(rate, std::sqrt(ensemble.total_coupling_squared()));
    return rate + 0.5 * ensemble.gamma0;
}

StateVector evolve(const StateVector& state, const DiscretizedEnsemble& ensemble,
                   const spectral::BusParams& bus, double duration, double dt) {
    return evolve_constant(state, ensemble, bus, duration, dt, false);
}

StateVector evolve_adjoint(const StateVector& state, const DiscretizedEnsemble& ensemble,
                           const spectral::BusParams& bus, double duration, double dt) {
    return evolve_constant(state, ensemble, bus, duration, dt, true);
}

StateVector evolve(const StateVector& state, const DiscretizedEnsemble& ensemble,
                   const FluxSchedule& schedule, double kappa, double dt) {
    check_state(state, ensemble);
    if (!(kappa >= 0.0)) throw Error(ErrorCode::invalid_parameter, "bus kappa must be >= 0");
    const double rate = std::max(fastest_rate(ensemble, schedule.min_frequency(), state.frame),
                                 fastest_rate(ensemble, schedule.max_frequency(), state.frame));
    check_dt(dt, rate + 0.5 * kappa);
    StateVector out = state;
    const double duration = schedule.duration();
    if (duration == 0.0) return out;
    const std::size_t steps = step_count(duration, dt);
    const double h = duration / static_cast<double>(steps);
    Rk4Workspace work(out.amplitudes.size());
    const auto bus_diag = [&](double t) {
        return Complex{0.0, -1.0} * Complex{schedule.omega_at(t) - state.frame, -0.5 * kappa};
    };
    auto g_start = make_generator(ensemble, schedule.initial(), kappa, state.frame, false);
    auto g_mid = g_start;
    auto g_end = g_start;
    for (std::size_t s = 0; s < steps; ++s) {
        const double t0 = h * static_cast<double>(s);
        g_start.bus_diag = bus_diag(t0);
        g_mid.bus_diag = bus_diag(t0 + 0.5 * h);
        g_end.bus_diag = bus_diag(t0 + h);
        rk4_step(out.amplitudes, h, g_start, g_mid, g_end, work);
        if ((s & 1023u) == 1023u) check_finite(out.amplitudes);
    }
    check_finite(out.amplitudes);
    out.time += duration;
    return out;
}

}  // namespace spinmem::oracle
