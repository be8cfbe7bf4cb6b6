#include "spinmem/analysis/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "detail/fftw.hpp"
#include "spinmem/error.hpp"
#include "spinmem/units.hpp"

namespace spinmem::analysis {

Spectrum magnitude_spectrum(std::span<const double> series, double dt, const SpectrumOptions& options) {
    if (series.size() < 64) throw Error(ErrorCode::series_too_short, "FFT analysis needs at least 64 samples");
    if (!(dt > 0.0)) throw Error(ErrorCode::invalid_parameter, "sample spacing must be positive");
    if (options.zero_padding < 1) throw Error(ErrorCode::invalid_parameter, "zero padding factor must be >= 1");

    const std::size_t n = series.size();
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
    std::vector<Complex> buffer(n * options.zero_padding, Complex{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        double w = 1.0;
        if (options.window == Window::hann) {
            w = 0.5 * (1.0 - std::cos(two_pi * static_cast<double>(k) / static_cast<double>(n - 1)));
        }
        buffer[k] = (series[k] - mean) * w;
    }
    const std::size_t m = buffer.size();
    const auto transformed = detail::forward_dft(std::move(buffer));

    Spectrum s;
    const std::size_t half = m / 2 + 1;
    s.omega.resize(half);
    s.magnitude.resize(half);
    const double d_omega = two_pi / (dt * static_cast<double>(m));
    for (std::size_t k = 0; k < half; ++k) {
        s.omega[k] = d_omega * static_cast<double>(k);
        s.magnitude[k] = std::abs(transformed[k]);
    }
    return s;
}

PeakSet find_peaks(const Spectrum& spectrum, double threshold) {
    const auto& a = spectrum.magnitude;
    PeakSet peaks;
    if (a.size() < 3) return peaks;
    const double top = *std::max_element(a.begin(), a.end());
    if (!(top > 0.0)) return peaks;
    const double floor = threshold * top;
    const double d_omega = spectrum.omega[1] - spectrum.omega[0];

    for (std::size_t k = 1; k + 1 < a.size(); ++k) {
        if (!(a[k] > a[k - 1] && a[k] >= a[k + 1]) || a[k] < floor) continue;
        const double denom = a[k - 1] - 2.0 * a[k] + a[k + 1];
        double shift = 0.0, height = a[k];
        if (denom < 0.0) {
            shift = 0.5 * (a[k - 1] - a[k + 1]) / denom;
            height = a[k] - 0.25 * (a[k - 1] - a[k + 1]) * shift;
        }
        const double half_height = 0.5 * height;
        // Half-height crossings, linearly interpolated.
        std::size_t lo = k;
        while (lo > 0 && a[lo] > half_height) --lo;
        std::size_t hi = k;
        while (hi + 1 < a.size() && a[hi] > half_height) ++hi;
        auto cross = [&](std::size_t i0, std::size_t i1) {
            const double y0 = a[i0], y1 = a[i1];
            const double f = (y0 == y1) ? 0.0 : (half_height - y0) / (y1 - y0);
            return spectrum.omega[i0] + f * (spectrum.omega[i1] - spectrum.omega[i0]);
        };
        const double left = a[lo] <= half_height ? cross(lo, lo + 1) : spectrum.omega[lo];
        const double right = a[hi] <= half_height ? cross(hi - 1, hi) : spectrum.omega[hi];
        peaks.push_back({spectrum.omega[k] + shift * d_omega, height, right - left});
    }
    return peaks;
}

PeakSet fft_spectrum(std::span<const double> series, double dt, const SpectrumOptions& options) {
    return find_peaks(magnitude_spectrum(series, dt, options), options.threshold);
}

}  // namespace spinmem::analysis
