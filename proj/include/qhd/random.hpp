#pragma once

// Reproducible draws for `qhd verify` and the property tests. The generator is
// std::mt19937_64, whose output sequence is fixed by the C++ standard, and a
// uniform double in [0, 1) is formed from the top 53 bits of one output.
// Standard distribution classes are avoided: their algorithms differ between
// standard libraries.

#include <cstdint>
#include <random>

namespace qhd {

class UnitRandom {
 public:
  explicit UnitRandom(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qhd
