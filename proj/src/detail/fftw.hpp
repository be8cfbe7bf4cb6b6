#pragma once

#include <vector>

#include "spinmem/units.hpp"

namespace spinmem::detail {

// out[n] = sum_m in[m] exp(-2 pi i m n / M). Safe to call from several threads.
std::vector<Complex> forward_dft(std::vector<Complex> in);

}  // namespace spinmem::detail
