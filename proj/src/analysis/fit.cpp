#include "spinmem/analysis/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spinmem/error.hpp"
#include "spinmem/units.hpp"

namespace spinmem::analysis {

namespace {

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

struct Bounds {
    Eigen::VectorXd lo, hi;

    Bounds(const FitBounds& b, std::size_t n)
        : lo(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), -std::numeric_limits<double>::infinity())),
          hi(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), std::numeric_limits<double>::infinity())) {
        if (!b.lower.empty()) {
            if (b.lower.size() != n) throw Error(ErrorCode::invalid_parameter, "lower bound size mismatch");
            lo = to_vector(b.lower);
        }
        if (!b.upper.empty()) {
            if (b.upper.size() != n) throw Error(ErrorCode::invalid_parameter, "upper bound size mismatch");
            hi = to_vector(b.upper);
        }
        for (Eigen::Index i = 0; i < lo.size(); ++i) {
            if (!(lo[i] <= hi[i])) throw Error(ErrorCode::invalid_parameter, "lower bound above upper bound");
        }
    }

    Eigen::VectorXd clamp(const Eigen::VectorXd& p) const { return p.cwiseMax(lo).cwiseMin(hi); }
};

Eigen::VectorXd evaluate(const ResidualFunction& f, const Eigen::VectorXd& p, Eigen::Index expected) {
    const std::vector<double> params = to_std(p);
    const auto r = f(params);
    if (expected >= 0 && static_cast<Eigen::Index>(r.size()) != expected) {
        throw Error(ErrorCode::invalid_parameter, "residual length changed between evaluations");
    }
    Eigen::VectorXd out = to_vector(r);
    if (!out.allFinite()) throw Error(ErrorCode::numerical_instability, "non-finite residual");
    return out;
}

Eigen::MatrixXd jacobian(const ResidualFunction& f, const Eigen::VectorXd& p, const Eigen::VectorXd& r,
                         const Bounds& bounds, const Eigen::VectorXd& scale) {
    Eigen::MatrixXd j(r.size(), p.size());
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        double h = 1.5e-8 * std::max(std::abs(p[k]), scale[k]);
        if (p[k] + h > bounds.hi[k]) h = -h;
        Eigen::VectorXd q = p;
        q[k] += h;
        j.col(k) = (evaluate(f, q, r.size()) - r) / h;
    }
    return j;
}

}  // namespace

FitResult levenberg_marquardt(const ResidualFunction& residuals, std::vector<double> initial,
                              const FitBounds& fit_bounds, const FitOptions& options) {
    const std::size_t n = initial.size();
    if (n == 0) throw Error(ErrorCode::invalid_parameter, "no fit parameters");
    const Bounds bounds(fit_bounds, n);

    Eigen::VectorXd p = bounds.clamp(to_vector(initial));
    Eigen::VectorXd scale = p.cwiseAbs();
    for (Eigen::Index k = 0; k < scale.size(); ++k) {
        if (scale[k] == 0.0) {
            const double width = bounds.hi[k] - bounds.lo[k];
            scale[k] = std::isfinite(width) && width > 0.0 ? 1e-3 * width : 1.0;
        }
    }

    Eigen::VectorXd r = evaluate(residuals, p, -1);
    if (r.size() < static_cast<Eigen::Index>(n)) {
        throw Error(ErrorCode::invalid_parameter, "fewer residuals than parameters");
    }
    double cost = r.squaredNorm();
    double lambda = options.initial_lambda;

    FitResult result;
    result.residual_history.push_back(std::sqrt(cost));

    Eigen::MatrixXd j = jacobian(residuals, p, r, bounds, scale);
    bool converged = false;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        const Eigen::MatrixXd jtj = j.transpose() * j;
        const Eigen::VectorXd grad = j.transpose() * r;
        Eigen::MatrixXd a = jtj;
        for (Eigen::Index k = 0; k < a.rows(); ++k) a(k, k) += lambda * std::max(jtj(k, k), 1e-300);
        const Eigen::VectorXd delta = a.ldlt().solve(-grad);
        const Eigen::VectorXd trial = bounds.clamp(p + delta);
        const Eigen::VectorXd step = trial - p;

        const double step_norm = step.cwiseQuotient(p.cwiseAbs().cwiseMax(scale)).lpNorm<Eigen::Infinity>();
        if (!delta.allFinite()) {
            lambda *= 10.0;
            continue;
        }
        if (step_norm < options.step_tolerance) {
            converged = true;
            break;
        }

        Eigen::VectorXd r_trial;
        bool ok = true;
        try {
            r_trial = evaluate(residuals, trial, r.size());
        } catch (const Error& e) {
            if (e.code() != ErrorCode::numerical_instability) throw;
            ok = false;
        }
        const double trial_cost = ok ? r_trial.squaredNorm() : std::numeric_limits<double>::infinity();
        if (trial_cost < cost) {
            p = trial;
            r = r_trial;
            const double relative_drop = (cost - trial_cost) / std::max(cost, 1e-300);
            cost = trial_cost;
            result.residual_history.push_back(std::sqrt(cost));
            lambda = std::max(lambda / 10.0, 1e-12);
            if (cost == 0.0 || (relative_drop < 1e-15 && step_norm < 1e3 * options.step_tolerance)) {
                converged = true;
                ++it;
                break;
            }
            j = jacobian(residuals, p, r, bounds, scale);
        } else {
            lambda *= 10.0;
            if (lambda > 1e16) {
                converged = true;
                break;
            }
        }
    }

    result.params = to_std(p);
    result.residual_norm = std::sqrt(cost);
    result.iterations = it;
    if (!converged) {
        std::ostringstream msg;
        msg << "no convergence after " << options.max_iterations << " iterations, residual norm "
            << result.residual_norm;
        throw Error(ErrorCode::fit_nonconvergence, msg.str());
    }
    const Eigen::Index m = r.size();
    const Eigen::Index dof = std::max<Eigen::Index>(m - static_cast<Eigen::Index>(n), 1);
    const double s2 = cost / static_cast<double>(dof);
    const Eigen::MatrixXd jtj = j.transpose() * j;
    result.covariance = s2 * jtj.completeOrthogonalDecomposition().pseudoInverse();
    return result;
}

double ramsey_fringe_model(double tau, double delta, double a_hf, double t2_star) {
    if (!(t2_star > 0.0)) throw Error(ErrorCode::invalid_parameter, "T2* must be positive");
    double sum = 0.0;
    for (int i = -1; i <= 1; ++i) sum += std::cos((delta + i * a_hf) * tau);
    return std::exp(-tau / t2_star) * sum;
}

CurveModel ramsey_fringe_curve() {
    return {"ramsey_fringe",
            {"offset", "amplitude", "delta", "a_hf", "t2_star", "phase"},
            [](std::span<const double> x, std::span<const double> q) {
                std::vector<double> y(x.size());
                for (std::size_t k = 0; k < x.size(); ++k) {
                    double sum = 0.0;
                    for (int i = -1; i <= 1; ++i) sum += std::cos((q[2] + i * q[3]) * x[k] + q[5]);
                    y[k] = q[0] + q[1] * std::exp(-x[k] / q[4]) * sum;
                }
                return y;
            }};
}

CurveModel lorentzian_triplet_curve() {
    return {"lorentzian_triplet",
            {"offset", "amplitude", "center", "splitting", "fwhm"},
            [](std::span<const double> x, std::span<const double> q) {
                const double hw2 = 0.25 * q[4] * q[4];
                std::vector<double> y(x.size());
                for (std::size_t k = 0; k < x.size(); ++k) {
                    double sum = 0.0;
                    for (int i = -1; i <= 1; ++i) {
                        const double d = x[k] - q[2] - i * q[3];
                        sum += hw2 / (d * d + hw2);
                    }
                    y[k] = q[0] + q[1] * sum;
                }
                return y;
            }};
}

CurveModel constant_curve() {
    return {"constant", {"value"}, [](std::span<const double> x, std::span<const double> q) {
                return std::vector<double>(x.size(), q[0]);
            }};
}

CurveModel rabi_linewidth_curve(spectral::GroupLabel label, double center, double g, double hf_splitting,
                                spectral::BusParams bus, spectral::SpectralNumerics numerics) {
    return {"rabi_linewidth",
            {"fwhm"},
            [=](std::span<const double> x, std::span<const double> q) {
                if (!(q[0] > 0.0)) throw Error(ErrorCode::numerical_instability, "non-positive linewidth");
                const spectral::EnsembleGroup group{
                    label, g, spectral::make_hyperfine_density(center, hf_splitting, q[0]), 0.0};
                return spectral::rabi_protocol(group, bus, x, numerics);
            }};
}

FitResult fit_curve(const CurveModel& model, std::span<const double> x, std::span<const double> y,
                    std::vector<double> initial, const FitBounds& bounds, const FitOptions& options) {
    if (initial.size() != model.parameter_names.size()) {
        throw Error(ErrorCode::invalid_parameter, "initial guess does not match the parameters of " + model.name);
    }
    if (x.size() != y.size() || x.size() < initial.size() + 2) {
        throw Error(ErrorCode::invalid_parameter, "fit needs matching x/y with at least parameters + 2 points");
    }
    auto residuals = [&](std::span<const double> q) {
        auto v = model.evaluate(x, q);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= y[k];
        return v;
    };
    return levenberg_marquardt(residuals, std::move(initial), bounds, options);
}

}  // namespace spinmem::analysis
