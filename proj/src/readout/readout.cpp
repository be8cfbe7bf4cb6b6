#include "spinmem/readout/readout.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "spinmem/analysis/fit.hpp"
#include "spinmem/error.hpp"
#include "spinmem/units.hpp"

namespace spinmem::readout {

namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void ReadoutErrorModel::validate() const {
    if (!in_unit(e0) || !in_unit(e1) || !in_unit(p_eq)) {
        throw Error(ErrorCode::invalid_parameter, "readout errors and p_eq must lie in [0, 1]");
    }
    if (!(e0 + e1 < 1.0)) throw Error(ErrorCode::invalid_parameter, "e0 + e1 must be below 1");
}

double switching_probability(const ReadoutErrorModel& model, double p_e) {
    model.validate();
    if (!in_unit(p_e)) throw Error(ErrorCode::out_of_range, "excited probability outside [0, 1]");
    return model.e0 * (1.0 - p_e) + (1.0 - model.e1) * p_e;
}

ExcitedEstimate excited_probability(const ReadoutErrorModel& model, double p_sw) {
    model.validate();
    if (!std::isfinite(p_sw)) throw Error(ErrorCode::invalid_parameter, "switching probability is not finite");
    const double p = (p_sw - model.e0) / (1.0 - model.e0 - model.e1);
    if (p < 0.0) return {0.0, true};
    if (p > 1.0) return {1.0, true};
    return {p, false};
}

ReadoutErrorModel calibrate(double p_sw0, double p_sw_pi, double p_eq) {
    if (!in_unit(p_sw0) || !in_unit(p_sw_pi) || !in_unit(p_eq)) {
        throw Error(ErrorCode::invalid_parameter, "calibration inputs must lie in [0, 1]");
    }
    const double det = 1.0 - 2.0 * p_eq;
    if (std::abs(det) < 1e-9) throw Error(ErrorCode::singular_calibration, "p_eq = 1/2 makes the calibration singular");
    // [[1-p, p], [p, 1-p]] (e0, 1 - e1) = (P_sw0, P_swpi)
    const double e0 = ((1.0 - p_eq) * p_sw0 - p_eq * p_sw_pi) / det;
    const double one_minus_e1 = ((1.0 - p_eq) * p_sw_pi - p_eq * p_sw0) / det;
    ReadoutErrorModel model{e0, 1.0 - one_minus_e1, p_eq};
    model.validate();
    return model;
}

double thermal_excited_population(double omega, double temperature) {
    if (!(omega > 0.0) || !(temperature >= 0.0)) {
        throw Error(ErrorCode::invalid_parameter, "frequency must be positive and temperature non-negative");
    }
    if (temperature == 0.0) return 0.0;
    const double x = planck_h * omega / two_pi / (boltzmann_k * temperature);
    return 1.0 / (std::exp(x) + 1.0);
}

void SCurveModel::validate() const {
    double total = 0.0;
    for (int s = 0; s < 3; ++s) {
        if (!(width[s] > 0.0)) throw Error(ErrorCode::invalid_parameter, "S-curve widths must be positive");
        if (!in_unit(weight[s])) throw Error(ErrorCode::invalid_parameter, "S-curve weights must lie in [0, 1]");
        total += weight[s];
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::invalid_parameter, "S-curve weights must sum to 1");
}

double scurve(const SCurveModel& model, double power) {
    double p = 0.0;
    for (int s = 0; s < 3; ++s) {
        if (model.weight[s] == 0.0) continue;
        p += model.weight[s] * 0.5 * (1.0 + std::erf((power - model.threshold[s]) / model.width[s]));
    }
    return p;
}

ThermalFit estimate_thermal_population(const SCurveSamples& equilibrium, const SCurveSamples& after_pi) {
    for (const auto* s : {&equilibrium, &after_pi}) {
        if (s->power.size() != s->p_sw.size() || s->power.size() < 4) {
            throw Error(ErrorCode::invalid_parameter, "S-curve samples need matching power and p_sw arrays of length >= 4");
        }
    }

    auto model_pair = [](std::span<const double> q) {
        SCurveModel eq;
        eq.threshold = {q[0], q[1], 0.0};
        eq.width = {q[2], q[3], 1.0};
        eq.weight = {1.0 - q[4], q[4], 0.0};
        SCurveModel pi_curve = eq;
        pi_curve.weight = {q[4], 1.0 - q[4], 0.0};
        return std::pair{eq, pi_curve};
    };

    auto residuals = [&](std::span<const double> q) {
        const auto [eq, pc] = model_pair(q);
        std::vector<double> r;
        r.reserve(equilibrium.power.size() + after_pi.power.size());
        for (std::size_t i = 0; i < equilibrium.power.size(); ++i) {
            r.push_back(scurve(eq, equilibrium.power[i]) - equilibrium.p_sw[i]);
        }
        for (std::size_t i = 0; i < after_pi.power.size(); ++i) {
            r.push_back(scurve(pc, after_pi.power[i]) - after_pi.p_sw[i]);
        }
        return r;
    };

    // Starting point: the ground-state threshold is where the equilibrium curve
    // crosses 1/2, the excited one where the post-pi curve does.
    auto crossing = [](const SCurveSamples& s) {
        for (std::size_t i = 1; i < s.power.size(); ++i) {
            if ((s.p_sw[i - 1] - 0.5) * (s.p_sw[i] - 0.5) <= 0.0) return s.power[i];
        }
        return s.power[s.power.size() / 2];
    };
    const auto [pmin, pmax] = std::minmax_element(equilibrium.power.begin(), equilibrium.power.end());
    const double range = *pmax - *pmin;
    const double t_g = crossing(equilibrium);
    const double t_e = crossing(after_pi);
    std::vector<double> q0{t_g, t_e, 0.05 * range, 0.05 * range, 0.1};

    analysis::FitBounds bounds;
    bounds.lower = {*pmin - range, *pmin - range, 1e-6 * range, 1e-6 * range, 0.0};
    bounds.upper = {*pmax + range, *pmax + range, range, range, 0.5};
    const auto fit = analysis::levenberg_marquardt(residuals, q0, bounds);
    const auto [eq, pc] = model_pair(fit.params);
    return {fit.params[4], eq, pc, fit.residual_norm};
}

}  // namespace spinmem::readout
