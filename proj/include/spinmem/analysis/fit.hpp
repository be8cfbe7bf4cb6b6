// Bounded Levenberg-Marquardt least squares and the curve models used
// to fit simulated and synthetic data.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinmem/spectral/ensemble.hpp"
#include "spinmem/spectral/protocols.hpp"

namespace spinmem::analysis {

using ResidualFunction = std::function<std::vector<double>(std::span<const double> params)>;

struct FitOptions {
    int max_iterations{200};
    double step_tolerance{1e-8};  // relative parameter step
    double initial_lambda{1e-3};
};

struct FitBounds {
    std::vector<double> lower;  // empty = unbounded
    std::vector<double> upper;
};

struct FitResult {
    std::vector<double> params;
    Eigen::MatrixXd covariance;
    double residual_norm{0.0};
    int iterations{0};
    std::vector<double> residual_history;  // accepted iterates, non-increasing
};

// Minimizes |r(p)|^2 with a forward-difference Jacobian. Only cost-decreasing
// steps are accepted. Converges when the relative step drops below
// step_tolerance; throws fit_nonconvergence (with the final residual) when the
// iteration budget is exhausted first.
FitResult levenberg_marquardt(const ResidualFunction& residuals, std::vector<double> initial,
                              const FitBounds& bounds = {}, const FitOptions& options = {});

// y = model(x; params) evaluated on a whole abscissa vector at once.
struct CurveModel {
    std::string name;
    std::vector<std::string> parameter_names;
    std::function<std::vector<double>(std::span<const double> x, std::span<const double> params)> evaluate;
};

// Ramsey fringe exp(-tau/T2*) * sum_{i=-1..1} cos(2 pi (f_delta + i f_hf) tau) with
// delta = 2 pi f_delta and a_hf = 2 pi f_hf given in rad/s, tau in s.
double ramsey_fringe_model(double tau, double delta, double a_hf, double t2_star);

// params: offset, amplitude, delta (rad/s), a_hf (rad/s), t2_star (s), phase (rad)
//   y = offset + amplitude * exp(-x/T2*) * sum_i cos((delta + i a_hf) x + phase)
CurveModel ramsey_fringe_curve();

// params: offset, amplitude, center, splitting, fwhm; three equal Lorentzian
// lines of unit peak height (units follow x).
CurveModel lorentzian_triplet_curve();

// params: value
CurveModel constant_curve();

// params: fwhm (rad/s) of each hyperfine line. x = interaction time (s), y = p(tau)
// from the spectral method with everything else fixed.
CurveModel rabi_linewidth_curve(spectral::GroupLabel label, double center, double g,
                                double hf_splitting, spectral::BusParams bus,
                                spectral::SpectralNumerics numerics = {});

// Requires x.size() == y.size() >= parameter count + 2.
FitResult fit_curve(const CurveModel& model, std::span<const double> x, std::span<const double> y,
                    std::vector<double> initial, const FitBounds& bounds = {},
                    const FitOptions& options = {});

}  // namespace spinmem::analysis
