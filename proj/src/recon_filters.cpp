// SPDX-License-Identifier: Apache-2.0

#include "qmimo/recon_filters.hpp"

#include <cmath>
#include <string>

namespace qmimo {
namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  if (x == std::round(x)) return 0.0;
  return std::sin(kPi * x) / (kPi * x);
}

void check_config(const FilterConfig& c) {
  if (c.ideal) return;
  if (c.order < 0 || c.order > 2) {
    throw ConfigError("filter: Butterworth order must be 0, 1 or 2 (got " +
                      std::to_string(c.order) + ")");
  }
  if (c.order > 0 && !(c.f_cut_hz > 0.0)) throw ConfigError("filter: f_cut must be positive");
}

}  // namespace

cplx zoh_response(double f, double ts) {
  const double x = f * ts;
  return std::polar(1.0, -kPi * x) * sinc(x);
}

cplx butterworth_response(double f, double f_cut, int order) {
  if (order < 0 || order > 2) {
    throw ConfigError("butterworth_response: order must be 0, 1 or 2");
  }
  if (order == 0) return 1.0;
  if (!(f_cut > 0.0)) throw ConfigError("butterworth_response: f_cut must be positive");
  const double x = f / f_cut;
  if (order == 1) return 1.0 / cplx(1.0, x);
  return 1.0 / cplx(1.0 - x * x, std::sqrt(2.0) * x);
}

cplx FilterChain::analog_response(double f) const {
  if (config.ideal) {
    const double fs = 1.0 / sampling_period;
    return (f >= -fs / 2.0 && f < fs / 2.0) ? cplx(1.0) : cplx(0.0);
  }
  cplx r = butterworth_response(f, config.f_cut_hz, config.order);
  if (config.zoh_enabled) r *= zoh_response(f, sampling_period);
  return r;
}

FilterChain sampled_response(const SystemGrid& grid, const FilterConfig& config) {
  check_config(config);
  FilterChain chain;
  chain.config = config;
  chain.sampling_period = grid.sampling_period();
  chain.response.resize(grid.N);
  for (int k = 0; k < grid.N; ++k) {
    chain.response[k] = chain.analog_response(signed_bin(k, grid.N) * grid.subcarrier_spacing);
  }
  return chain;
}

std::vector<cplx> dpd_coefficients(const FilterChain& chain, std::span<const int> occupied) {
  std::vector<cplx> coeff(chain.response.size(), cplx(0.0));
  for (int k : occupied) {
    const cplx r = chain.response.at(static_cast<std::size_t>(k));
    if (std::abs(r) < 1e-6) {
      throw std::domain_error("dpd_coefficients: response at occupied bin " + std::to_string(k) +
                              " is too small to invert");
    }
    coeff[k] = 1.0 / r;
  }
  return coeff;
}

double power_rescale_xi(std::span<const CMat> precoders, std::span<const cplx> response,
                        std::span<const int> occupied) {
  double num = 0.0;
  double den = 0.0;
  for (int k : occupied) {
    const double energy = precoders[k].squaredNorm();
    num += energy;
    den += energy / std::norm(response[k]);
  }
  if (!(num > 0.0)) throw std::domain_error("power_rescale_xi: precoders carry no energy");
  return std::sqrt(num / den);
}

int effective_length_samples(const FilterChain& chain, double tolerance) {
  const auto& c = chain.config;
  if (c.ideal) return 0;
  double seconds = 0.0;
  if (c.order > 0) {
    const double w = 2.0 * kPi * c.f_cut_hz;
    // Envelope decay rate of the impulse response: w for order 1, w / sqrt(2)
    // for the second-order Butterworth pair.
    const double rate = c.order == 1 ? w : w / std::sqrt(2.0);
    seconds = std::log(1.0 / tolerance) / rate;
  }
  const int hold = c.zoh_enabled ? 1 : 0;
  return static_cast<int>(std::ceil(seconds / chain.sampling_period)) + hold;
}

}  // namespace qmimo
