// Radix-2 FFT, unitary-convention helpers.
#pragma once

#include <cstddef>
#include <vector>

#include "sectorlab/linalg.hpp"

namespace sectorlab {

// In-place forward DFT, X_k = sum_j x_j e^{-2 pi i jk / M}; M a power of two.
void fft(std::vector<cplx>& x);

std::size_t next_pow2(std::size_t n);

}  // namespace sectorlab
