// SPDX-License-Identifier: Apache-2.0

#include "qmimo/sysgrid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qmimo {

bool SystemGrid::is_occupied(int k) const {
  return std::binary_search(occupied.begin(), occupied.end(), k);
}

SystemGrid derive_grid(const GridParams& p) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("grid: " + what);
  };
  require(p.samples_per_symbol > 0, "N must be positive");
  require(p.samples_per_symbol % 2 == 0, "N must be even");
  require(p.occupied_subcarriers > 0, "S must be positive");
  require(p.occupied_subcarriers % 2 == 0, "S must be even");
  require(p.occupied_subcarriers < p.samples_per_symbol, "S must be smaller than N");
  require(p.subcarrier_spacing_hz > 0.0, "subcarrier spacing must be positive");
  require(p.cp_len > 0, "cyclic prefix length must be positive");
  require(p.antennas > 0, "B must be positive");
  require(p.users > 0, "U must be positive");
  require(p.users <= p.antennas, "U must not exceed B");
  require(p.meas_factor >= 1, "meas_factor must be at least 1");

  SystemGrid g;
  g.N = p.samples_per_symbol;
  g.S = p.occupied_subcarriers;
  g.subcarrier_spacing = p.subcarrier_spacing_hz;
  g.cp_len = p.cp_len;
  g.B = p.antennas;
  g.U = p.users;
  g.meas_factor = p.meas_factor;

  const int half = g.S / 2;
  for (int k = 1; k <= half; ++k) g.occupied.push_back(k);
  for (int k = g.N - half; k < g.N; ++k) g.occupied.push_back(k);
  for (int k = 0; k < g.N; ++k) {
    if (!g.is_occupied(k)) g.guard.push_back(k);
  }
  return g;
}

int signed_bin(int k, int N) {
  if (k < 0 || k >= N) {
    throw std::out_of_range("signed_bin: bin " + std::to_string(k) + " outside [0, " +
                            std::to_string(N) + ")");
  }
  return (k + N / 2) % N - N / 2;
}

int wrap_bin(long p, int N) {
  const long r = p % N;
  return static_cast<int>(r < 0 ? r + N : r);
}

std::vector<int> inband_with_dc(const SystemGrid& grid) {
  std::vector<int> bins{0};
  bins.insert(bins.end(), grid.occupied.begin(), grid.occupied.end());
  return bins;
}

AdjacentChannels adjacent_channels(const SystemGrid& grid) {
  const int center = static_cast<int>(std::lround(grid.S / 0.9));
  const int half = grid.S / 2;
  if (center + half >= grid.N / 2) {
    throw ConfigError("grid: adjacent channels do not fit inside the DAC band (OSR too small)");
  }
  AdjacentChannels adj;
  for (int p = center - half; p <= center + half; ++p) {
    adj.upper.push_back(p);
    adj.lower.push_back(grid.N - center - half + (p - (center - half)));
  }
  return adj;
}

}  // namespace qmimo
