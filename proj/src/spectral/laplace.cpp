#include "spinmem/spectral/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "detail/fftw.hpp"
#include "spinmem/error.hpp"

namespace spinmem::spectral {

namespace {

constexpr Complex I{0.0, 1.0};

}  // namespace

void FrequencyGrid::validate() const {
    if (size < 2) throw Error(ErrorCode::invalid_grid, "frequency grid needs at least 2 points");
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw Error(ErrorCode::invalid_grid, "frequency grid spacing must be positive");
    }
    if (!std::isfinite(start)) throw Error(ErrorCode::invalid_grid, "frequency grid start not finite");
}

FrequencyGrid FrequencyGrid::centered(double center, double span, double spacing) {
    if (!(spacing > 0.0) || !(span > spacing)) {
        throw Error(ErrorCode::invalid_grid, "grid span must exceed a positive spacing");
    }
    const auto n = static_cast<std::size_t>(std::llround(span / spacing));
    FrequencyGrid grid{center - 0.5 * spacing * static_cast<double>(n), spacing, n};
    grid.validate();
    return grid;
}

FrequencyGrid FrequencyGrid::from_samples(std::span<const double> omegas) {
    if (omegas.size() < 2) throw Error(ErrorCode::invalid_grid, "frequency grid needs at least 2 points");
    const double step = (omegas.back() - omegas.front()) / static_cast<double>(omegas.size() - 1);
    const double tol = 1e-9 * std::max(std::abs(step), 1e-300) +
                       1e-15 * std::max(std::abs(omegas.front()), std::abs(omegas.back()));
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const double expected = omegas.front() + step * static_cast<double>(i);
        if (std::abs(omegas[i] - expected) > std::max(tol, 1e-9 * std::abs(step))) {
            throw Error(ErrorCode::invalid_grid,
                        "frequency samples are not uniformly spaced at index " + std::to_string(i));
        }
    }
    FrequencyGrid grid{omegas.front(), step, omegas.size()};
    grid.validate();
    return grid;
}

LaplaceContour LaplaceContour::with_default_abscissa(const FrequencyGrid& grid) {
    return {grid, 10.0 / grid.max_time()};
}

std::vector<Complex> inverse_laplace(std::span<const Complex> samples,
                                     const LaplaceContour& contour,
                                     std::span<const double> times,
                                     std::span<const PoleTerm> known_poles) {
    const FrequencyGrid& grid = contour.grid;
    grid.validate();
    if (samples.size() != grid.size) {
        throw Error(ErrorCode::invalid_grid, "sample count does not match the frequency grid");
    }
    if (!(contour.abscissa >= 0.0) || !std::isfinite(contour.abscissa)) {
        throw Error(ErrorCode::invalid_parameter, "Bromwich abscissa must be >= 0");
    }
    const double window = grid.max_time();
    const double dt = grid.time_step();
    bool on_lattice = true;
    for (double t : times) {
        if (!(t >= 0.0)) throw Error(ErrorCode::invalid_parameter, "inverse Laplace times must be >= 0");
        if (t >= window) {
            throw Error(ErrorCode::window_exceeded,
                        "time " + std::to_string(t) + " s is outside the resolvable window " +
                            std::to_string(window) + " s");
        }
        const double n = std::round(t / dt);
        if (std::abs(t - n * dt) > 1e-9 * dt) on_lattice = false;
    }

    std::vector<Complex> residual(samples.begin(), samples.end());
    for (std::size_t m = 0; m < grid.size; ++m) {
        const Complex w = contour.complex_omega(m);
        for (const auto& p : known_poles) residual[m] -= p.residue * I / (w - p.pole);
    }

    const double prefactor = grid.step / two_pi;
    std::vector<Complex> result(times.size());
    if (on_lattice && !times.empty()) {
        const auto transformed = detail::forward_dft(std::move(residual));
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double t = times[k];
            const auto n = static_cast<std::size_t>(std::llround(t / dt));
            result[k] = prefactor * std::exp(contour.abscissa * t) *
                        std::polar(1.0, -grid.start * t) * transformed[n];
        }
    } else {
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double t = times[k];
            const Complex rot = std::polar(1.0, -grid.step * t);
            Complex phase = 1.0;
            Complex acc = 0.0;
            for (std::size_t m = 0; m < grid.size; ++m) {
                acc += residual[m] * phase;
                phase *= rot;
                if ((m & 255u) == 255u) {
                    phase = std::polar(1.0, -grid.step * t * static_cast<double>(m + 1));
                }
            }
            result[k] = prefactor * std::exp(contour.abscissa * t) *
                        std::polar(1.0, -grid.start * t) * acc;
        }
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (const auto& p : known_poles) result[k] += p.residue * std::exp(-I * p.pole * times[k]);
    }
    return result;
}

std::vector<Complex> inverse_laplace(std::span<const Complex> samples,
                                     std::span<const double> omegas, double abscissa,
                                     std::span<const double> times,
                                     std::span<const PoleTerm> known_poles) {
    const auto grid = FrequencyGrid::from_samples(omegas);
    return inverse_laplace(samples, LaplaceContour{grid, abscissa}, times, known_poles);
}

TransferFunctionGrid sample_transfer_functions(const EnsembleGroup& group, const BusParams& bus,
                                               const LaplaceContour& contour) {
    group.validate();
    bus.validate();
    contour.grid.validate();
    const double lo = group.density.lower_edge(20.0);
    const double hi = group.density.upper_edge(20.0);
    const double grid_lo = contour.grid.start;
    const double grid_hi = contour.grid.at(contour.grid.size - 1);
    if (lo < grid_lo || hi > grid_hi) {
        throw Error(ErrorCode::coverage,
                    "frequency grid does not cover the spin density +- 20 linewidths");
    }
    TransferFunctionGrid out{contour, {}, {}, {}, {}};
    const std::size_t n = contour.grid.size;
    out.t1.resize(n);
    out.t2.resize(n);
    out.t3.resize(n);
    out.t4.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
        const Complex w = contour.complex_omega(m);
        out.t1[m] = transfer_t1(group, bus, w);
        out.t2[m] = transfer_t2(group, bus, w);
        out.t3[m] = transfer_t3(group, bus, w);
        out.t4[m] = -out.t3[m];
    }
    return out;
}

std::vector<PoleTerm> t1_asymptote(const BusParams& bus) {
    return {{1.0, bus.complex_frequency()}};
}

std::vector<PoleTerm> t2_asymptote(const EnsembleGroup& group) {
    std::vector<PoleTerm> poles;
    for (const auto& c : group.density.components()) {
        poles.push_back({c.weight, Complex{c.center, -0.5 * (c.fwhm + group.gamma0)}});
    }
    return poles;
}

std::vector<PoleTerm> t3_asymptote(const EnsembleGroup& group, const BusParams& bus) {
    // g / ((omega - a)(omega - b)) = r i/(omega - a) - r i/(omega - b), r = -i g / (a - b).
    const Complex a = bus.complex_frequency();
    const Complex b{group.density.mean_center(), a.imag() - two_pi * 20e6};
    const Complex r = Complex{0.0, -1.0} * group.g / (a - b);
    return {{r, a}, {-r, b}};
}

}  // namespace spinmem::spectral
