// Inverse Laplace transform along a shifted Bromwich line, sampled
// on a uniform frequency grid and summed with an FFT.
//
// For a transfer function F(s) sampled as F(sigma - i*omega_m) on a uniform grid,
//
//     f(t) = exp(sigma t) / (2 pi) * sum_m dOmega * exp(-i omega_m t) F(sigma - i omega_m).
//
// The discrete sum equals the exact transform periodized with period
// T = 2 pi / dOmega; the damping exp(-sigma T) suppresses the wrapped copies. Known
// pole terms r * i / (omega - p) are subtracted before summation and added back
// analytically as r * exp(-i p t), which removes the 1/omega tail responsible for
// the half-value artefact at t = 0.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spinmem/spectral/ensemble.hpp"
#include "spinmem/units.hpp"

namespace spinmem::spectral {

struct FrequencyGrid {
    double start{0.0};  // rad/s
    double step{0.0};   // rad/s
    std::size_t size{0};

    double at(std::size_t i) const noexcept { return start + step * static_cast<double>(i); }
    double span() const noexcept { return step * static_cast<double>(size); }
    double center() const noexcept { return start + 0.5 * step * static_cast<double>(size); }
    // Time lattice paired with the grid.
    double time_step() const noexcept { return two_pi / span(); }
    double max_time() const noexcept { return two_pi / step; }

    void validate() const;

    // Grid of `round(span/spacing)` points whose center is `center`.
    static FrequencyGrid centered(double center, double span, double spacing);
    // Throws invalid_grid when the samples are not uniformly spaced.
    static FrequencyGrid from_samples(std::span<const double> omegas);
};

struct LaplaceContour {
    FrequencyGrid grid;
    double abscissa{0.0};  // sigma = Re(s) of the Bromwich line, 1/s

    // sigma = 10 / T puts the first periodic image at exp(-10) relative weight.
    static LaplaceContour with_default_abscissa(const FrequencyGrid& grid);
    Complex complex_omega(std::size_t i) const noexcept { return {grid.at(i), abscissa}; }
};

// Term r * i / (omega - pole) in the frequency domain, r * exp(-i pole t) in time.
struct PoleTerm {
    Complex residue;
    Complex pole;
};

// Inverse transform of samples F(sigma - i omega_m). Times must lie in
// [0, grid.max_time()]; times on the FFT lattice are served by a single FFT,
// other times by direct summation of the same quadrature.
std::vector<Complex> inverse_laplace(std::span<const Complex> samples,
                                     const LaplaceContour& contour,
                                     std::span<const double> times,
                                     std::span<const PoleTerm> known_poles = {});

// Overload for raw sample locations; validates uniform spacing.
std::vector<Complex> inverse_laplace(std::span<const Complex> samples,
                                     std::span<const double> omegas, double abscissa,
                                     std::span<const double> times,
                                     std::span<const PoleTerm> known_poles = {});

// t1..t4 sampled along a contour.
struct TransferFunctionGrid {
    LaplaceContour contour;
    std::vector<Complex> t1, t2, t3, t4;
};

// Throws coverage when the grid does not reach every density center +- 20 FWHM.
TransferFunctionGrid sample_transfer_functions(const EnsembleGroup& group, const BusParams& bus,
                                               const LaplaceContour& contour);

// Pole terms carrying the asymptotic 1/omega behaviour of t1 and t2.
std::vector<PoleTerm> t1_asymptote(const BusParams& bus);
std::vector<PoleTerm> t2_asymptote(const EnsembleGroup& group);
// Pole pair reproducing the g / omega^2 tail of t3. The second pole sits well
// below the bus pole so the residues stay bounded at zero detuning.
std::vector<PoleTerm> t3_asymptote(const EnsembleGroup& group, const BusParams& bus);

}  // namespace spinmem::spectral
