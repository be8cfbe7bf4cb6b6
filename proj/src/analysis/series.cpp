#include "spinmem/analysis/series.hpp"

#include "spinmem/error.hpp"

namespace spinmem::analysis {

namespace {

template <class Better>
std::vector<Extremum> extrema(std::span<const double> x, std::span<const double> y, Better better) {
    if (x.size() != y.size()) throw Error(ErrorCode::invalid_parameter, "x and y lengths differ");
    std::vector<Extremum> out;
    for (std::size_t k = 1; k + 1 < y.size(); ++k) {
        if (!(better(y[k], y[k - 1]) && !better(y[k + 1], y[k]))) continue;
        Extremum e{k, x[k], y[k]};
        const double h0 = x[k] - x[k - 1], h1 = x[k + 1] - x[k];
        // Vertex of the parabola through the three samples (non-uniform spacing).
        const double d0 = (y[k] - y[k - 1]) / h0, d1 = (y[k + 1] - y[k]) / h1;
        const double curv = (d1 - d0) / (0.5 * (h0 + h1));
        if (curv != 0.0) {
            const double slope_mid = d0 + 0.5 * h0 * curv;  // derivative at x[k]
            const double dx = -slope_mid / curv;
            if (dx > -h0 && dx < h1) {
                e.x = x[k] + dx;
                e.y = y[k] + slope_mid * dx + 0.5 * curv * dx * dx;
            }
        }
        out.push_back(e);
    }
    return out;
}

}  // namespace

std::vector<Extremum> local_minima(std::span<const double> x, std::span<const double> y) {
    return extrema(x, y, [](double a, double b) { return a < b; });
}

std::vector<Extremum> local_maxima(std::span<const double> x, std::span<const double> y) {
    return extrema(x, y, [](double a, double b) { return a > b; });
}

}  // namespace spinmem::analysis
