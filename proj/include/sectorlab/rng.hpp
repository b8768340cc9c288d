// Counter-based random streams. Every draw is a pure function of
// (seed, stream, index), so samples can be replayed in any order and the
// results do not depend on evaluation scheduling.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace sectorlab {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Strictly inside (0,1), so log() and 1-u stay finite.
inline double u64_to_unit(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(mix64(seed ^ mix64(0x6b79a8f1d3c2e507ULL + stream))) {}

  std::uint64_t next_u64() { return mix64(base_ + 0x9e3779b97f4a7c15ULL * ++counter_); }
  double next_uniform() { return u64_to_unit(next_u64()); }

  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::complex<double> next_complex_normal() {
    return {next_normal(), next_normal()};
  }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Gaussian variates addressed by (sample, slot). The antithetic partner of a
// sample mirrors the radial uniform of the Box-Muller pair, which pairs large
// radii with small ones and reduces the variance of even statistics.
class IndexedGaussians {
 public:
  IndexedGaussians(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(mix64(seed ^ mix64(0x2545f4914f6cdd1dULL + stream))) {}

  double operator()(std::uint64_t sample, std::uint64_t slot, bool antithetic) const {
    const std::uint64_t k = sample * 0x100000001b3ULL + slot;
    double u1 = u64_to_unit(mix64(base_ + 2 * k));
    const double u2 = u64_to_unit(mix64(base_ + 2 * k + 1));
    if (antithetic) u1 = 1.0 - u1;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::uint64_t base_;
};

}  // namespace sectorlab
