// SQUID tuning curve of the bus resonator
//
// omega_B(phi) = omega_max * sqrt(c / (c + p (1 - c))),  c = cos(pi phi),
// with phi in flux quanta and p the junction participation ratio.

#pragma once

namespace spinmem::flux {

struct TuningCurve {
    double omega_max{0.0};      // omega_B at zero flux, rad/s
    double participation{0.0};  // dimensionless
    double phi0{1.0};           // flux unit; phi arguments are phi / phi0

    // Participation chosen so omega_B(phi_ref) = omega_ref.
    static TuningCurve calibrated(double omega_max, double omega_ref, double phi_ref = 0.45);
};

inline constexpr double max_operating_flux = 0.45;

// Throws singular_flux for |phi| >= 0.5.
double omega_of_flux(const TuningCurve& curve, double phi);

// Unique phi in [0, 0.45] by bisection. Throws out_of_range when omega lies
// outside [omega_of_flux(0.45), omega_max].
double flux_of_omega(const TuningCurve& curve, double omega);

}  // namespace spinmem::flux
