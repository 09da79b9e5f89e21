// SPDX-License-Identifier: Apache-2.0
//
// Analog reconstruction stage of the DAC: zero-order hold followed by an
// optional Butterworth low-pass filter, plus the frequency-domain
// predistortion (DPD) that inverts it on the occupied subcarriers.

#ifndef QMIMO_RECON_FILTERS_HPP
#define QMIMO_RECON_FILTERS_HPP

#include <span>
#include <vector>

#include "qmimo/common.hpp"
#include "qmimo/sysgrid.hpp"

namespace qmimo {

struct FilterConfig {
  int order = 0;           // Butterworth order: 0 (no LP filter), 1 or 2
  double f_cut_hz = 0.0;   // required when order > 0
  bool zoh_enabled = true;
  // Ideal reconstruction: brick-wall low-pass on [-f_s/2, f_s/2) and nothing
  // else. Overrides order and zoh_enabled.
  bool ideal = false;
};

// e^{-j pi f Ts} sinc(f Ts), exact at f = 0 and at the nulls f = m / Ts.
cplx zoh_response(double f, double ts);

// (1 + j f/fc)^-1 for order 1, (1 + j sqrt(2) f/fc - (f/fc)^2)^-1 for order 2,
// 1 for order 0.
cplx butterworth_response(double f, double f_cut, int order);

struct FilterChain {
  FilterConfig config;
  double sampling_period = 0.0;
  std::vector<cplx> response;  // r_k at p(k) * delta_f, k = 0..N-1

  // Full analog response at an arbitrary (unwrapped) frequency.
  cplx analog_response(double f) const;
};

FilterChain sampled_response(const SystemGrid& grid, const FilterConfig& config);

// 1 / r_k on the occupied set and 0 on guard bins. Throws std::domain_error
// when an occupied |r_k| falls below 1e-6.
std::vector<cplx> dpd_coefficients(const FilterChain& chain, std::span<const int> occupied);

// Power rescale after DPD:
//   xi = sqrt( sum_k tr(P_k P_k^H) / sum_k |r_k|^-2 tr(P_k P_k^H) ),  k in occupied.
double power_rescale_xi(std::span<const CMat> precoders, std::span<const cplx> response,
                        std::span<const int> occupied);

// Samples (at the DAC rate) after which the reconstruction impulse response
// has decayed below `tolerance` of its scale. Zero for ideal reconstruction,
// which is treated as circular.
int effective_length_samples(const FilterChain& chain, double tolerance = 1e-3);

}  // namespace qmimo

#endif  // QMIMO_RECON_FILTERS_HPP
