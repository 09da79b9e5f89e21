// SPDX-License-Identifier: Apache-2.0
//
// Seeded random streams. Every random draw in the simulator comes from a
// stream derived from one master seed plus a named purpose and up to two
// indices (realization, symbol), so results do not depend on how trials are
// scheduled across threads.

#ifndef QMIMO_RNG_HPP
#define QMIMO_RNG_HPP

#include <cstdint>
#include <random>

#include "qmimo/common.hpp"

namespace qmimo {

enum class Substream : std::uint64_t {
  symbols = 1,
  channel = 2,
  noise = 3,
  mc_covariance = 4,
  oracle = 5,
};

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  static RandomStream derive(std::uint64_t master, Substream purpose,
                             std::uint64_t index = 0,
                             std::uint64_t subindex = 0);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal (Box-Muller; the second variate is cached).
  double normal();

  // Circularly-symmetric complex Gaussian with E|x|^2 = variance.
  cplx complex_normal(double variance = 1.0);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qmimo

#endif  // QMIMO_RNG_HPP
