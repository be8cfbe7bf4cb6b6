#include "spinmem/spectral/protocols.hpp"

#include <algorithm>

namespace spinmem::spectral {

LaplaceContour SpectralNumerics::contour(double center) const {
    const auto grid = FrequencyGrid::centered(center, span, spacing);
    auto c = LaplaceContour::with_default_abscissa(grid);
    if (abscissa) c.abscissa = *abscissa;
    return c;
}

std::vector<Complex> bus_amplitude(const EnsembleGroup& group, const BusParams& bus,
                                   std::span<const double> times,
                                   const SpectralNumerics& numerics) {
    const auto contour = numerics.contour(bus.omega_b);
    const auto tf = sample_transfer_functions(group, bus, contour);
    const auto poles = t1_asymptote(bus);
    return inverse_laplace(tf.t1, contour, times, poles);
}

std::vector<double> rabi_protocol(const EnsembleGroup& group, const BusParams& bus,
                                  std::span<const double> times,
                                  const SpectralNumerics& numerics) {
    const auto alpha = bus_amplitude(group, bus, times, numerics);
    std::vector<double> p(alpha.size());
    std::transform(alpha.begin(), alpha.end(), p.begin(), [](Complex a) { return std::norm(a); });
    return p;
}

std::vector<Complex> ramsey_spectral(const EnsembleGroup& group, const BusParams& bus,
                                     std::span<const double> times,
                                     const SpectralNumerics& numerics) {
    const auto contour = numerics.contour(bus.omega_b);
    const auto tf = sample_transfer_functions(group, bus, contour);
    std::vector<Complex> combined(tf.t1.size());
    for (std::size_t m = 0; m < combined.size(); ++m) {
        combined[m] = 0.5 * (tf.t1[m] - tf.t2[m] + tf.t3[m] - tf.t4[m]);
    }
    std::vector<PoleTerm> poles;
    for (const auto& p : t1_asymptote(bus)) poles.push_back({0.5 * p.residue, p.pole});
    for (const auto& p : t2_asymptote(group)) poles.push_back({-0.5 * p.residue, p.pole});
    // t3 - t4 = 2 t3
    for (const auto& p : t3_asymptote(group, bus)) poles.push_back(p);
    return inverse_laplace(combined, contour, times, poles);
}

}  // namespace spinmem::spectral
