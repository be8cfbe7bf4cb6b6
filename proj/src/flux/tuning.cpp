#include "spinmem/flux/tuning.hpp"

#include <cmath>

#include "spinmem/error.hpp"
#include "spinmem/units.hpp"

namespace spinmem::flux {

TuningCurve TuningCurve::calibrated(double omega_max, double omega_ref, double phi_ref) {
    if (!(omega_max > 0.0) || !(omega_ref > 0.0) || !(omega_ref < omega_max)) {
        throw Error(ErrorCode::invalid_parameter, "tuning curve needs 0 < omega_ref < omega_max");
    }
    if (!(phi_ref > 0.0 && phi_ref < 0.5)) {
        throw Error(ErrorCode::invalid_parameter, "reference flux must lie in (0, 0.5)");
    }
    const double c = std::cos(pi * phi_ref);
    const double r2 = (omega_ref / omega_max) * (omega_ref / omega_max);
    return {omega_max, (c / r2 - c) / (1.0 - c), 1.0};
}

double omega_of_flux(const TuningCurve& curve, double phi) {
    const double x = phi / curve.phi0;
    if (!(std::abs(x) < 0.5)) {
        throw Error(ErrorCode::singular_flux, "flux at or beyond half a flux quantum");
    }
    const double c = std::cos(pi * x);
    return curve.omega_max * std::sqrt(c / (c + curve.participation * (1.0 - c)));
}

double flux_of_omega(const TuningCurve& curve, double omega) {
    const double lowest = omega_of_flux(curve, max_operating_flux * curve.phi0);
    if (!(omega >= lowest && omega <= curve.omega_max)) {
        throw Error(ErrorCode::out_of_range, "bus frequency outside the operating tuning range");
    }
    double lo = 0.0;
    double hi = max_operating_flux;
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
        const double mid = 0.5 * (lo + hi);
        // omega_of_flux decreases with flux.
        if (omega_of_flux(curve, mid * curve.phi0) > omega) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi) * curve.phi0;
}

}  // namespace spinmem::flux
