// SPDX-License-Identifier: Apache-2.0
//
// Small fixtures shared by the unit tests.

#ifndef QMIMO_TEST_SUPPORT_HPP
#define QMIMO_TEST_SUPPORT_HPP

#include <vector>

#include "qmimo/channel.hpp"
#include "qmimo/rng.hpp"
#include "qmimo/sysgrid.hpp"

namespace qmimo::test {

inline SystemGrid small_grid(int N, int S, int B, int U, int cp = 16, int meas = 4,
                             double df = 240e3) {
  GridParams p;
  p.samples_per_symbol = N;
  p.occupied_subcarriers = S;
  p.subcarrier_spacing_hz = df;
  p.cp_len = cp;
  p.antennas = B;
  p.users = U;
  p.meas_factor = meas;
  return derive_grid(p);
}

inline ChannelRealization small_channel(const SystemGrid& grid, int L, std::uint64_t seed) {
  std::vector<double> aods;
  std::vector<double> dists;
  for (int u = 0; u < grid.U; ++u) {
    aods.push_back(30.0 + 40.0 * u);
    dists.push_back(80.0 + 20.0 * u);
  }
  RandomStream rng(seed);
  return draw_channel(grid, aods, dists, L, rng);
}

inline double rel_frobenius(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& ref) {
  return (a - ref).norm() / ref.norm();
}

}  // namespace qmimo::test

#endif  // QMIMO_TEST_SUPPORT_HPP
