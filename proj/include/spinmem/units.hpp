// Angular-frequency and time conversions used across spinmem

#pragma once

#include <complex>
#include <numbers>

namespace spinmem {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Ordinary frequency to angular frequency (rad/s).
constexpr double hz(double f) { return two_pi * f; }
constexpr double khz(double f) { return two_pi * f * 1e3; }
constexpr double mhz(double f) { return two_pi * f * 1e6; }
constexpr double ghz(double f) { return two_pi * f * 1e9; }

// Angular frequency back to ordinary units.
constexpr double to_mhz(double omega) { return omega / (two_pi * 1e6); }
constexpr double to_ghz(double omega) { return omega / (two_pi * 1e9); }

constexpr double ns(double t) { return t * 1e-9; }
constexpr double us(double t) { return t * 1e-6; }
constexpr double to_ns(double t) { return t * 1e9; }

inline constexpr double planck_h = 6.62607015e-34;   // J s
inline constexpr double boltzmann_k = 1.380649e-23;  // J/K

}  // namespace spinmem
