// SPDX-License-Identifier: Apache-2.0
//
// Symmetric uniform DAC transcoder and its Gaussian-input statistics.
//
// Labels are q_i = alpha * step * (i - (2^Q - 1) / 2), i = 0..2^Q-1, and the
// inner thresholds are tau_i = step * (i - 2^Q / 2), i = 1..2^Q-1. Real and
// imaginary parts are quantized independently; bins are half-open
// [tau_i, tau_{i+1}), so a sample on a threshold maps to the upper label.

#ifndef QMIMO_QUANTIZER_HPP
#define QMIMO_QUANTIZER_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "qmimo/common.hpp"
#include "qmimo/rng.hpp"

namespace qmimo {

struct QuantizerSpec {
  int bits = 1;
  double step = 1.0;
  double alpha = 1.0;
  double target_power = 1.0;       // per-sample E|Q(z)|^2 used for calibration
  std::vector<double> labels;      // 2^Q entries, ascending
  std::vector<double> thresholds;  // 2^Q - 1 inner thresholds, ascending

  int levels() const { return 1 << bits; }
  double quantize_real(double x) const;
};

// Builds labels and thresholds for the given (bits, step, alpha).
QuantizerSpec make_quantizer(int bits, double step, double alpha, double target_power = 1.0);

// Step minimizing E[(x - q(x))^2] for x ~ N(0, 1) with alpha = 1.
double mmse_step(int bits);

// Default step for a complex input of variance sigma2: mmse_step scaled by
// the per-dimension standard deviation sqrt(sigma2 / 2).
double default_step(int bits, double sigma2);

// Analytic E|Q(z)|^2 for z ~ CN(0, sigma2).
double output_power(const QuantizerSpec& spec, double sigma2);

// Chooses alpha so that the analytic output power equals 1 / (B * OSR).
QuantizerSpec calibrate(int bits, double step, double sigma2, int B, double osr);
// Same, matching the mean output power over a set of per-antenna variances.
QuantizerSpec calibrate(int bits, double step, std::span<const double> variances, int B,
                        double osr);

cplx quantize(cplx z, const QuantizerSpec& spec);

// Bussgang gain E[Q(z) z^*] / E|z|^2 for z ~ CN(0, sigma2).
double bussgang_gain(const QuantizerSpec& spec, double sigma2);
RVec bussgang_gains(const QuantizerSpec& spec, const RVec& variances);

// Output power not explained by the linear term: E|Q(z)|^2 - g^2 sigma2.
double distortion_power(const QuantizerSpec& spec, double sigma2);

// Arcsine law for 1-bit quantization of a zero-mean circularly-symmetric
// Gaussian vector with covariance cz:
//   C = (2S / (pi B N)) (asin(K_re) + j asin(K_im)).
CMat arcsine_covariance(const CMat& cz, int S, int B, int N);
// Same law with the prefactor taken from the quantizer's label magnitude,
// (alpha * step)^2 / pi. Rejects specs with bits != 1.
CMat arcsine_covariance(const CMat& cz, const QuantizerSpec& spec);

// (2 / pi) * asin of a normalized real correlation, clamped to [-1, 1].
double arcsine_correlation(double rho);

enum class MultibitMethod { diagonal_distortion, monte_carlo };

// Output covariance of a multi-bit quantizer (bits >= 2).
//  - diagonal_distortion: G cz G + D with D diagonal, D_ii = output power - g_i^2 cz_ii.
//  - monte_carlo: sample covariance of Q(z) over `draws` Gaussian vectors.
CMat multibit_output_covariance(const CMat& cz, const QuantizerSpec& spec,
                                MultibitMethod method, RandomStream* rng = nullptr,
                                std::size_t draws = 1'000'000);

}  // namespace qmimo

#endif  // QMIMO_QUANTIZER_HPP
