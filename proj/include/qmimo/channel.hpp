// SPDX-License-Identifier: Apache-2.0
//
// Plane-wave LoS + nLoS frequency-selective channel for a half-wavelength
// ULA at the base station:
//
//   [H_l]_{u,b} = psi_u gamma_{u,l} exp(-j pi b cos(theta_{u,l})),  b = 0..B-1
//
// Tap 0 is the LoS path (theta = phi_u, gamma^2 = 3/4). Taps 1..L-1 use
// theta = phi_u + theta_l with theta_l ~ U[-180, 180] deg drawn once per tap
// and shared by all UEs, and an exponential power delay profile normalized to
// a total nLoS power of 1/4. nLoS gains carry an independent uniform phase per
// (u, l); the LoS phase is 0. psi_u^2 = (100 / delta_u)^2.

#ifndef QMIMO_CHANNEL_HPP
#define QMIMO_CHANNEL_HPP

#include <span>
#include <vector>

#include "qmimo/common.hpp"
#include "qmimo/rng.hpp"
#include "qmimo/sysgrid.hpp"

namespace qmimo {

struct ChannelRealization {
  std::vector<CMat> taps;  // L matrices, U x B
  std::vector<CMat> freq;  // N matrices, U x B
  std::vector<double> aods_deg;
  std::vector<double> distances_m;
  int L = 0;
};

ChannelRealization draw_channel(const SystemGrid& grid, std::span<const double> aods_deg,
                                std::span<const double> distances_m, int L, RandomStream& rng);

// H_k = sum_l H_l e^{-j 2 pi k l / N} for k = 0..N-1 (direct evaluation).
std::vector<CMat> frequency_response(std::span<const CMat> taps, int N);

// ULA steering vector, entries exp(-j pi b cos(phi)), b = 0..B-1.
CVec steering_vector(double phi_deg, int B);

}  // namespace qmimo

#endif  // QMIMO_CHANNEL_HPP
