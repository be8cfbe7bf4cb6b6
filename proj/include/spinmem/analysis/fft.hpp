// Magnitude spectra of real time series and peak extraction

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spinmem::analysis {

enum class Window { hann, rectangular };

struct SpectrumOptions {
    Window window{Window::hann};
    double threshold{0.1};        // relative to the largest spectral magnitude
    std::size_t zero_padding{8};  // transform length = padding * series length
};

struct Spectrum {
    std::vector<double> omega;      // rad/s, from 0 to Nyquist
    std::vector<double> magnitude;  // |FFT| of the mean-removed, windowed series
};

struct Peak {
    double frequency;  // rad/s
    double height;
    double width;      // full width at half height, rad/s
};

using PeakSet = std::vector<Peak>;  // ascending frequency

// Throws series_too_short for fewer than 64 samples.
Spectrum magnitude_spectrum(std::span<const double> series, double dt, const SpectrumOptions& options = {});

PeakSet find_peaks(const Spectrum& spectrum, double threshold);

PeakSet fft_spectrum(std::span<const double> series, double dt, const SpectrumOptions& options = {});

}  // namespace spinmem::analysis
