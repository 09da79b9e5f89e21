// SPDX-License-Identifier: Apache-2.0

#include "qmimo/channel.hpp"

#include <cmath>

namespace qmimo {

CVec steering_vector(double phi_deg, int B) {
  if (B < 1) throw ConfigError("steering_vector: B must be positive");
  const double c = std::cos(phi_deg * kPi / 180.0);
  CVec v(B);
  for (int b = 0; b < B; ++b) v[b] = std::polar(1.0, -kPi * b * c);
  return v;
}

ChannelRealization draw_channel(const SystemGrid& grid, std::span<const double> aods_deg,
                                std::span<const double> distances_m, int L, RandomStream& rng) {
  if (L <= 0) throw ConfigError("channel: tap count must be positive");
  if (L > grid.N) throw ConfigError("channel: more taps than samples per symbol");
  if (static_cast<int>(aods_deg.size()) != grid.U || static_cast<int>(distances_m.size()) != grid.U) {
    throw ConfigError("channel: need one AoD and one distance per UE");
  }
  for (double d : distances_m) {
    if (!(d > 0.0)) throw ConfigError("channel: distances must be positive");
  }

  ChannelRealization ch;
  ch.L = L;
  ch.aods_deg.assign(aods_deg.begin(), aods_deg.end());
  ch.distances_m.assign(distances_m.begin(), distances_m.end());

  // Exponential PDP over the nLoS taps, normalized to 1/4 in total.
  std::vector<double> nlos_power(L, 0.0);
  double pdp_sum = 0.0;
  for (int l = 1; l < L; ++l) pdp_sum += std::exp(-static_cast<double>(l));
  for (int l = 1; l < L; ++l) nlos_power[l] = 0.25 * std::exp(-static_cast<double>(l)) / pdp_sum;

  // One angular offset per tap (shared by the UEs), drawn before the gains so
  // the offsets do not depend on U.
  std::vector<double> offsets(L, 0.0);
  for (int l = 1; l < L; ++l) offsets[l] = rng.uniform(-180.0, 180.0);

  ch.taps.assign(L, CMat::Zero(grid.U, grid.B));
  for (int u = 0; u < grid.U; ++u) {
    const double psi = 100.0 / distances_m[u];
    ch.taps[0].row(u) = psi * std::sqrt(0.75) * steering_vector(aods_deg[u], grid.B).transpose();
    for (int l = 1; l < L; ++l) {
      const cplx gain = std::polar(psi * std::sqrt(nlos_power[l]), rng.uniform(-kPi, kPi));
      ch.taps[l].row(u) = gain * steering_vector(aods_deg[u] + offsets[l], grid.B).transpose();
    }
  }
  ch.freq = frequency_response(ch.taps, grid.N);
  return ch;
}

std::vector<CMat> frequency_response(std::span<const CMat> taps, int N) {
  if (taps.empty()) throw ConfigError("frequency_response: no taps");
  if (static_cast<int>(taps.size()) > N) throw ConfigError("frequency_response: L exceeds N");
  std::vector<CMat> freq(N, CMat::Zero(taps[0].rows(), taps[0].cols()));
  for (int k = 0; k < N; ++k) {
    for (std::size_t l = 0; l < taps.size(); ++l) {
      // (k * l) mod N keeps the phase argument small and exact.
      const long kl = (static_cast<long>(k) * static_cast<long>(l)) % N;
      freq[k] += std::polar(1.0, -2.0 * kPi * static_cast<double>(kl) / N) * taps[l];
    }
  }
  return freq;
}

}  // namespace qmimo
