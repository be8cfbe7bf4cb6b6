// Normalized spin spectral densities built from Lorentzian lines

#pragma once

#include <vector>

namespace spinmem::spectral {

struct LorentzianComponent {
    double center{0.0};  // rad/s
    double fwhm{0.0};    // rad/s
    double weight{0.0};
};

// Weighted sum of unit-area Lorentzians. Weights are validated to sum to one.
class SpinDensity {
public:
    explicit SpinDensity(std::vector<LorentzianComponent> components);

    // Rescales the weights so they sum to one before validating.
    static SpinDensity normalized(std::vector<LorentzianComponent> components);

    const std::vector<LorentzianComponent>& components() const noexcept { return components_; }

    double operator()(double omega) const noexcept;

    double mean_center() const noexcept;
    double max_fwhm() const noexcept;
    // Smallest interval holding every center +- `linewidths` FWHMs.
    double lower_edge(double linewidths) const noexcept;
    double upper_edge(double linewidths) const noexcept;

private:
    std::vector<LorentzianComponent> components_;
};

// Three equal-weight lines at center - splitting, center, center + splitting.
// A zero splitting is allowed and yields three coincident lines.
SpinDensity make_hyperfine_density(double center, double hf_splitting, double peak_fwhm);

SpinDensity make_single_line(double center, double fwhm);

double density_eval(const SpinDensity& density, double omega) noexcept;

}  // namespace spinmem::spectral
