#include "spinmem/oracle/discretize.hpp"

#include <cmath>

#include "spinmem/error.hpp"
#include "spinmem/units.hpp"

namespace spinmem::oracle {

double DiscretizedEnsemble::total_coupling_squared() const noexcept {
    double s = 0.0;
    for (double g : couplings) s += g * g;
    return s;
}

namespace {

void check_n(std::size_t n) {
    if (n == 0 || n == 2) {
        throw Error(ErrorCode::invalid_parameter,
                    "discretization needs n >= 3 oscillators (or n = 1 for the single-mode collapse)");
    }
}

// Integral of the density from -infinity to omega.
double cumulative(const spectral::SpinDensity& density, double omega) {
    double c = 0.0;
    for (const auto& line : density.components()) {
        c += line.weight * (0.5 + std::atan(2.0 * (omega - line.center) / line.fwhm) / pi);
    }
    return c;
}

}  // namespace

DiscretizedEnsemble discretize(const spectral::EnsembleGroup& group, std::size_t n, double span,
                               std::optional<double> center) {
    group.validate();
    check_n(n);
    const double c = center.value_or(group.density.mean_center());
    if (n == 1) return {{c}, {group.g}, group.gamma0};
    return discretize(std::span<const spectral::EnsembleGroup>(&group, 1), n, span, c);
}

DiscretizedEnsemble discretize(std::span<const spectral::EnsembleGroup> groups, std::size_t n,
                               double span, double center) {
    check_n(n);
    if (groups.empty()) throw Error(ErrorCode::invalid_parameter, "no spin groups to discretize");
    if (n == 1) {
        throw Error(ErrorCode::invalid_parameter, "single-mode collapse needs exactly one group");
    }
    if (!(span > 0.0)) throw Error(ErrorCode::invalid_parameter, "discretization span must be positive");
    const double lo = center - 0.5 * span;
    const double hi = center + 0.5 * span;
    for (const auto& g : groups) {
        g.validate();
        if (g.gamma0 != groups.front().gamma0) {
            throw Error(ErrorCode::invalid_parameter, "groups on a shared grid must share gamma0");
        }
        if (g.density.lower_edge(20.0) < lo || g.density.upper_edge(20.0) > hi) {
            throw Error(ErrorCode::coverage,
                        "discretization span does not cover every line +- 20 linewidths");
        }
    }

    const double step = span / static_cast<double>(n);
    DiscretizedEnsemble ens;
    ens.gamma0 = groups.front().gamma0;
    ens.omegas.resize(n);
    for (std::size_t j = 0; j < n; ++j) ens.omegas[j] = lo + (static_cast<double>(j) + 0.5) * step;

    // Each cell carries the exact density mass of [w_j - step/2, w_j + step/2];
    // the mass outside the span is folded into the two edge cells so the total
    // is g^2 without inflating the core couplings.
    std::vector<double> g2(n, 0.0);
    for (const auto& g : groups) {
        std::vector<double> mass(n);
        double prev = cumulative(g.density, lo);
        for (std::size_t j = 0; j < n; ++j) {
            const double next = cumulative(g.density, lo + static_cast<double>(j + 1) * step);
            mass[j] = next - prev;
            prev = next;
        }
        mass.front() += cumulative(g.density, lo);
        mass.back() += 1.0 - cumulative(g.density, hi);
        double norm = 0.0;
        for (double m : mass) norm += m;
        for (std::size_t j = 0; j < n; ++j) g2[j] += g.g * g.g * mass[j] / norm;
    }
    ens.couplings.resize(n);
    for (std::size_t j = 0; j < n; ++j) ens.couplings[j] = std::sqrt(g2[j]);
    return ens;
}

std::vector<double> collective_mode(const DiscretizedEnsemble& ensemble) {
    const double g = std::sqrt(ensemble.total_coupling_squared());
    if (!(g > 0.0)) throw Error(ErrorCode::invalid_parameter, "collective mode undefined for g = 0");
    std::vector<double> x(ensemble.size());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = ensemble.couplings[j] / g;
    return x;
}

}  // namespace spinmem::oracle
