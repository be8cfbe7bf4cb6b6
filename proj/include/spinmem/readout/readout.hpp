// Switching-detector readout: error model, calibration and S-curves

#pragma once

#include <array>
#include <span>

namespace spinmem::readout {

struct ReadoutErrorModel {
    double e0{0.0};    // switch although the qubit is in |g>
    double e1{0.0};    // no switch although the qubit is in |e>
    double p_eq{0.0};  // thermal excited population

    // All in [0, 1] and e0 + e1 < 1.
    void validate() const;
};

// P_sw = e0 (1 - P_e) + (1 - e1) P_e. Throws out_of_range for P_e outside [0, 1].
double switching_probability(const ReadoutErrorModel& model, double p_e);

struct ExcitedEstimate {
    double p_e;
    bool clamped;  // P_sw fell outside [e0, 1 - e1] and the result was clipped to [0, 1]
};

// Inverse of switching_probability.
ExcitedEstimate excited_probability(const ReadoutErrorModel& model, double p_sw);

// Solves P_sw0 = e0 (1 - p_eq) + (1 - e1) p_eq and
//        P_swpi = e0 p_eq + (1 - e1)(1 - p_eq) for (e0, e1).
ReadoutErrorModel calibrate(double p_sw0, double p_sw_pi, double p_eq);

// Excited population of a two-level system at temperature T (K).
double thermal_excited_population(double omega, double temperature);

// Index 0, 1, 2 = |g>, |e>, |f>.
struct SCurveModel {
    std::array<double, 3> threshold{};  // readout power at the 50 % point
    std::array<double, 3> width{1.0, 1.0, 1.0};
    std::array<double, 3> weight{1.0, 0.0, 0.0};

    void validate() const;
};

// sum_s weight_s * (1 + erf((power - threshold_s) / width_s)) / 2
double scurve(const SCurveModel& model, double power);

struct SCurveSamples {
    std::span<const double> power;
    std::span<const double> p_sw;
};

struct ThermalFit {
    double p_eq;
    SCurveModel equilibrium;
    SCurveModel after_pi;
    double residual_norm;
};

// Joint least-squares fit of the equilibrium curve (weights 1 - p, p, 0) and the
// post-pi curve (weights p, 1 - p, 0) with shared thresholds and widths.
ThermalFit estimate_thermal_population(const SCurveSamples& equilibrium,
                                       const SCurveSamples& after_pi);

}  // namespace spinmem::readout
