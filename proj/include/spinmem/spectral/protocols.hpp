// Spectral-method observables: storage/retrieval p(tau) and the
// idealized single-photon Ramsey amplitude.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "spinmem/spectral/ensemble.hpp"
#include "spinmem/spectral/laplace.hpp"
#include "spinmem/units.hpp"

namespace spinmem::spectral {

struct SpectralNumerics {
    double span{mhz(400.0)};    // frequency-grid span, rad/s
    double spacing{mhz(0.05)};  // frequency-grid spacing, rad/s
    std::optional<double> abscissa;  // Bromwich sigma; default 10 / T

    LaplaceContour contour(double center) const;
};

// p(tau) = |L^-1[t1](tau)|^2 for a photon placed in the bus at tau = 0.
std::vector<double> rabi_protocol(const EnsembleGroup& group, const BusParams& bus,
                                  std::span<const double> times,
                                  const SpectralNumerics& numerics = {});

// Lab-frame bus amplitude alpha(t) = L^-1[t1](t).
std::vector<Complex> bus_amplitude(const EnsembleGroup& group, const BusParams& bus,
                                   std::span<const double> times,
                                   const SpectralNumerics& numerics = {});

// alpha(t) = 1/2 L^-1[t1 - t2 + t3 - t4](t), the Ramsey amplitude with ideal
// pi/2 pulses that prepare (x_G - x_S)/sqrt(2) and project on (x_G + x_S)/sqrt(2).
std::vector<Complex> ramsey_spectral(const EnsembleGroup& group, const BusParams& bus,
                                     std::span<const double> times,
                                     const SpectralNumerics& numerics = {});

}  // namespace spinmem::spectral
