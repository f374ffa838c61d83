#pragma once

#include <cstdint>

#include "spinflow/torus_grid.hpp"

namespace spinflow {

// Counter-based generator: value(i) is a pure function of (seed, i), the
// splitmix64 stream.  Any implementation language reproduces the same fields
// from the same 64-bit seed; the exact constants are documented in the README.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  // uniform in [0, 1)
  double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }
  // uniform in [-1, 1)
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

// Random smooth fields, hard band-limited to |k_j| <= kmax per axis.  Modes are
// visited in lexicographic order over [-kmax, kmax]^dim and two variates are
// drawn per mode (also for modes later discarded by Hermitian symmetry), so the
// field is a fixed function of (seed, shape, kmax, amplitude).
Field random_real_field(CounterRng& rng, const Torus& g, int kmax, double amplitude);

// Independent complex coefficients per component; no symmetry constraint.
SpinorField random_spinor_field(CounterRng& rng, const Torus& g, int comps,
                                std::array<double, 4> twist, int kmax, double amplitude);

}  // namespace spinflow
