#include "spinmem/spectral/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spinmem/error.hpp"
#include "spinmem/units.hpp"

namespace spinmem::spectral {

namespace {

double weight_sum(const std::vector<LorentzianComponent>& components) {
    return std::accumulate(components.begin(), components.end(), 0.0,
                           [](double acc, const LorentzianComponent& c) { return acc + c.weight; });
}

void check_components(const std::vector<LorentzianComponent>& components) {
    if (components.empty()) {
        throw Error(ErrorCode::invalid_parameter, "spin density needs at least one component");
    }
    for (const auto& c : components) {
        if (!(c.fwhm > 0.0) || !std::isfinite(c.fwhm)) {
            throw Error(ErrorCode::invalid_parameter, "Lorentzian fwhm must be positive");
        }
        if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
            throw Error(ErrorCode::invalid_parameter, "Lorentzian weight must be positive");
        }
        if (!std::isfinite(c.center)) {
            throw Error(ErrorCode::invalid_parameter, "Lorentzian center must be finite");
        }
    }
}

}  // namespace

SpinDensity::SpinDensity(std::vector<LorentzianComponent> components)
    : components_(std::move(components)) {
    check_components(components_);
    const double sum = weight_sum(components_);
    if (std::abs(sum - 1.0) > 1e-12) {
        throw Error(ErrorCode::invalid_parameter,
                    "spin density weights sum to " + std::to_string(sum) + ", expected 1");
    }
}

SpinDensity SpinDensity::normalized(std::vector<LorentzianComponent> components) {
    check_components(components);
    const double sum = weight_sum(components);
    for (auto& c : components) c.weight /= sum;
    // Absorb the last rounding residue into the final weight.
    components.back().weight += 1.0 - weight_sum(components);
    return SpinDensity(std::move(components));
}

double SpinDensity::operator()(double omega) const noexcept {
    double value = 0.0;
    for (const auto& c : components_) {
        const double hw = 0.5 * c.fwhm;
        const double d = omega - c.center;
        value += c.weight * (hw / pi) / (d * d + hw * hw);
    }
    return value;
}

double SpinDensity::mean_center() const noexcept {
    double m = 0.0;
    for (const auto& c : components_) m += c.weight * c.center;
    return m;
}

double SpinDensity::max_fwhm() const noexcept {
    double w = 0.0;
    for (const auto& c : components_) w = std::max(w, c.fwhm);
    return w;
}

double SpinDensity::lower_edge(double linewidths) const noexcept {
    double lo = components_.front().center - linewidths * components_.front().fwhm;
    for (const auto& c : components_) lo = std::min(lo, c.center - linewidths * c.fwhm);
    return lo;
}

double SpinDensity::upper_edge(double linewidths) const noexcept {
    double hi = components_.front().center + linewidths * components_.front().fwhm;
    for (const auto& c : components_) hi = std::max(hi, c.center + linewidths * c.fwhm);
    return hi;
}

SpinDensity make_hyperfine_density(double center, double hf_splitting, double peak_fwhm) {
    if (!(peak_fwhm > 0.0)) {
        throw Error(ErrorCode::invalid_parameter, "hyperfine peak fwhm must be positive");
    }
    if (!(hf_splitting >= 0.0)) {
        throw Error(ErrorCode::invalid_parameter, "hyperfine splitting must be non-negative");
    }
    constexpr double third = 1.0 / 3.0;
    return SpinDensity::normalized({{center - hf_splitting, peak_fwhm, third},
                                    {center, peak_fwhm, third},
                                    {center + hf_splitting, peak_fwhm, third}});
}

SpinDensity make_single_line(double center, double fwhm) {
    return SpinDensity({{center, fwhm, 1.0}});
}

double density_eval(const SpinDensity& density, double omega) noexcept { return density(omega); }

}  // namespace spinmem::spectral
