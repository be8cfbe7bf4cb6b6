// Extrema of sampled curves

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spinmem::analysis {

struct Extremum {
    std::size_t index;  // sample index of the discrete extremum
    double x;           // parabolically refined abscissa
    double y;           // parabolically refined value
};

std::vector<Extremum> local_minima(std::span<const double> x, std::span<const double> y);
std::vector<Extremum> local_maxima(std::span<const double> x, std::span<const double> y);

}  // namespace spinmem::analysis
