// SPDX-License-Identifier: Apache-2.0
//
// OFDM / DAC dimensioning and the subcarrier index sets shared by every other
// module.
//
// Subcarrier k (DFT bin, 0 <= k < N) sits at the signed frequency index
// p(k) = (k + N/2) mod N - N/2, i.e. at p(k) * delta_f Hz. The occupied set is
// {1..S/2} U {N-S/2..N-1}; the DC bin is always a guard bin.

#ifndef QMIMO_SYSGRID_HPP
#define QMIMO_SYSGRID_HPP

#include <vector>

#include "qmimo/common.hpp"

namespace qmimo {

// Raw dimensioning parameters as read from a configuration file.
struct GridParams {
  int samples_per_symbol = 1024;         // N
  int occupied_subcarriers = 300;        // S
  double subcarrier_spacing_hz = 15e3;   // delta_f
  int cp_len = 72;                       // samples at the DAC rate
  int antennas = 64;                     // B
  int users = 4;                         // U
  int meas_factor = 10;                  // analog-measurement oversampling
};

struct SystemGrid {
  int N = 0;
  int S = 0;
  double subcarrier_spacing = 0.0;
  int cp_len = 0;
  int B = 0;
  int U = 0;
  int meas_factor = 10;
  std::vector<int> occupied;  // ascending bin indices
  std::vector<int> guard;     // ascending bin indices, contains 0

  double sample_rate() const { return N * subcarrier_spacing; }
  double sampling_period() const { return 1.0 / sample_rate(); }
  double bandwidth() const { return S * subcarrier_spacing; }
  double osr() const { return static_cast<double>(N) / S; }
  bool is_occupied(int k) const;

  // Number of bins of the analog measurement grid (meas_factor * N).
  int meas_bins() const { return meas_factor * N; }
  // Per-sample power budget of each DAC, 1 / (B * OSR).
  double per_antenna_power() const { return 1.0 / (B * osr()); }
};

SystemGrid derive_grid(const GridParams& params);

// Signed frequency index of DFT bin k; throws std::out_of_range for k outside [0, N).
int signed_bin(int k, int N);

// DFT bin holding signed frequency index p (any integer, wrapped modulo N).
int wrap_bin(long p, int N);

// Occupied subcarriers plus the DC bin, the in-band set for power sums.
std::vector<int> inband_with_dc(const SystemGrid& grid);

// Bins closest to the two adjacent channels. The channel raster is
// f_BW / 0.9 (an occupied bandwidth of 90 % of the channel bandwidth) and
// each set spans S + 1 bins; for N = 1024, S = 300 this yields
// lower = {541..841} and upper = {183..483}.
struct AdjacentChannels {
  std::vector<int> lower;
  std::vector<int> upper;
};
AdjacentChannels adjacent_channels(const SystemGrid& grid);

}  // namespace qmimo

#endif  // QMIMO_SYSGRID_HPP
