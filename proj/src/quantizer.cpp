// SPDX-License-Identifier: Apache-2.0

#include "qmimo/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qmimo {
namespace {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

void check_bits(int bits) {
  if (bits < 1 || bits > 16) throw ConfigError("quantizer: bits must be in [1, 16]");
}

// E[q(x)^2] for x ~ N(0, s^2) and a single real dimension.
double per_dimension_power(const QuantizerSpec& spec, double s) {
  const int L = spec.levels();
  double acc = 0.0;
  double lo_cdf = 0.0;
  for (int i = 0; i < L; ++i) {
    const double hi_cdf = i + 1 < L ? normal_cdf(spec.thresholds[i] / s) : 1.0;
    acc += spec.labels[i] * spec.labels[i] * (hi_cdf - lo_cdf);
    lo_cdf = hi_cdf;
  }
  return acc;
}

// Mean-squared error of the alpha = 1 quantizer with the given step on N(0, 1).
double unit_gaussian_mse(int bits, double step) {
  const int L = 1 << bits;
  double cross = 0.0;  // E[x q(x)]
  double power = 0.0;  // E[q(x)^2]
  for (int i = 0; i < L; ++i) {
    const double label = step * (i - (L - 1) / 2.0);
    const double lo = i == 0 ? -std::numeric_limits<double>::infinity() : step * (i - L / 2);
    const double hi = i == L - 1 ? std::numeric_limits<double>::infinity()
                                 : step * (i + 1 - L / 2);
    const double pdf_lo = std::isinf(lo) ? 0.0 : normal_pdf(lo);
    const double pdf_hi = std::isinf(hi) ? 0.0 : normal_pdf(hi);
    const double cdf_lo = std::isinf(lo) ? 0.0 : normal_cdf(lo);
    const double cdf_hi = std::isinf(hi) ? 1.0 : normal_cdf(hi);
    cross += label * (pdf_lo - pdf_hi);
    power += label * label * (cdf_hi - cdf_lo);
  }
  return 1.0 - 2.0 * cross + power;
}

}  // namespace

double QuantizerSpec::quantize_real(double x) const {
  const auto idx = std::upper_bound(thresholds.begin(), thresholds.end(), x) - thresholds.begin();
  return labels[static_cast<std::size_t>(idx)];
}

QuantizerSpec make_quantizer(int bits, double step, double alpha, double target_power) {
  check_bits(bits);
  if (!(step > 0.0)) throw ConfigError("quantizer: step must be positive");
  if (!(alpha > 0.0)) throw ConfigError("quantizer: alpha must be positive");
  QuantizerSpec spec;
  spec.bits = bits;
  spec.step = step;
  spec.alpha = alpha;
  spec.target_power = target_power;
  const int L = spec.levels();
  spec.labels.resize(L);
  for (int i = 0; i < L; ++i) spec.labels[i] = alpha * step * (i - (L - 1) / 2.0);
  spec.thresholds.resize(L - 1);
  for (int i = 1; i < L; ++i) spec.thresholds[i - 1] = step * (i - L / 2);
  return spec;
}

double mmse_step(int bits) {
  check_bits(bits);
  // Golden-section search; the Gaussian MSE is unimodal in the step.
  double lo = 1e-5;
  double hi = 4.0;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - ratio * (hi - lo);
  double b = lo + ratio * (hi - lo);
  double fa = unit_gaussian_mse(bits, a);
  double fb = unit_gaussian_mse(bits, b);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - ratio * (hi - lo);
      fa = unit_gaussian_mse(bits, a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + ratio * (hi - lo);
      fb = unit_gaussian_mse(bits, b);
    }
  }
  return 0.5 * (lo + hi);
}

double default_step(int bits, double sigma2) {
  if (!(sigma2 > 0.0)) throw ConfigError("quantizer: input variance must be positive");
  return mmse_step(bits) * std::sqrt(sigma2 / 2.0);
}

double output_power(const QuantizerSpec& spec, double sigma2) {
  if (!(sigma2 > 0.0)) throw ConfigError("quantizer: input variance must be positive");
  return 2.0 * per_dimension_power(spec, std::sqrt(sigma2 / 2.0));
}

QuantizerSpec calibrate(int bits, double step, double sigma2, int B, double osr) {
  if (!(sigma2 > 0.0)) throw ConfigError("quantizer: input variance must be positive");
  const double v[] = {sigma2};
  return calibrate(bits, step, std::span<const double>(v), B, osr);
}

QuantizerSpec calibrate(int bits, double step, std::span<const double> variances, int B,
                        double osr) {
  if (!(step > 0.0)) throw ConfigError("quantizer: step must be positive");
  if (variances.empty()) throw ConfigError("quantizer: no input variances given");
  if (B <= 0 || !(osr > 0.0)) throw ConfigError("quantizer: B and OSR must be positive");
  const double target = 1.0 / (B * osr);
  const QuantizerSpec unit = make_quantizer(bits, step, 1.0, target);
  double mean_power = 0.0;
  for (double v : variances) mean_power += output_power(unit, v);
  mean_power /= static_cast<double>(variances.size());
  // Output power scales with alpha^2.
  return make_quantizer(bits, step, std::sqrt(target / mean_power), target);
}

cplx quantize(cplx z, const QuantizerSpec& spec) {
  return {spec.quantize_real(z.real()), spec.quantize_real(z.imag())};
}

double bussgang_gain(const QuantizerSpec& spec, double sigma2) {
  if (!(sigma2 > 0.0)) throw ConfigError("bussgang_gain: input variance must be positive");
  const double sigma = std::sqrt(sigma2);
  const int half = spec.levels() / 2;
  double sum = 0.0;
  for (int i = 1; i < spec.levels(); ++i) {
    const double t = spec.step * (i - half);
    sum += std::exp(-t * t / sigma2);
  }
  return spec.alpha * spec.step / (std::sqrt(kPi) * sigma) * sum;
}

RVec bussgang_gains(const QuantizerSpec& spec, const RVec& variances) {
  RVec g(variances.size());
  for (Eigen::Index i = 0; i < variances.size(); ++i) g[i] = bussgang_gain(spec, variances[i]);
  return g;
}

double distortion_power(const QuantizerSpec& spec, double sigma2) {
  const double g = bussgang_gain(spec, sigma2);
  return output_power(spec, sigma2) - g * g * sigma2;
}

double arcsine_correlation(double rho) {
  return (2.0 / kPi) * std::asin(std::clamp(rho, -1.0, 1.0));
}

namespace {

CMat arcsine_scaled(const CMat& cz, double prefactor) {
  if (cz.rows() != cz.cols()) throw std::invalid_argument("arcsine_covariance: matrix not square");
  const Eigen::Index n = cz.rows();
  RVec inv_sd(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = cz(i, i).real();
    if (!(d > 0.0)) {
      throw std::domain_error("arcsine_covariance: diagonal entry " + std::to_string(i) +
                              " is not strictly positive");
    }
    inv_sd[i] = 1.0 / std::sqrt(d);
  }
  CMat out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j) {
        // K_ii = 1 by construction; rounding near asin's branch point would cost ~1e-8.
        out(i, i) = prefactor * (kPi / 2.0);
        continue;
      }
      const cplx k = cz(i, j) * (inv_sd[i] * inv_sd[j]);
      const double re = std::asin(std::clamp(k.real(), -1.0, 1.0));
      const double im = std::asin(std::clamp(k.imag(), -1.0, 1.0));
      out(i, j) = prefactor * cplx(re, im);
    }
  }
  return out;
}

}  // namespace

CMat arcsine_covariance(const CMat& cz, int S, int B, int N) {
  if (S <= 0 || B <= 0 || N <= 0) throw ConfigError("arcsine_covariance: dimensions must be positive");
  return arcsine_scaled(cz, 2.0 * S / (kPi * B * N));
}

CMat arcsine_covariance(const CMat& cz, const QuantizerSpec& spec) {
  if (spec.bits != 1) throw std::invalid_argument("arcsine_covariance: only valid for 1-bit quantizers");
  const double a = spec.alpha * spec.step;
  return arcsine_scaled(cz, a * a / kPi);
}

CMat multibit_output_covariance(const CMat& cz, const QuantizerSpec& spec,
                                MultibitMethod method, RandomStream* rng, std::size_t draws) {
  if (spec.bits < 2) throw std::invalid_argument("multibit_output_covariance: needs bits >= 2");
  if (cz.rows() != cz.cols()) throw std::invalid_argument("multibit_output_covariance: matrix not square");
  const Eigen::Index n = cz.rows();

  if (method == MultibitMethod::diagonal_distortion) {
    RVec var(n);
    for (Eigen::Index i = 0; i < n; ++i) var[i] = cz(i, i).real();
    const RVec g = bussgang_gains(spec, var);
    CMat out = g.asDiagonal() * cz * g.asDiagonal();
    for (Eigen::Index i = 0; i < n; ++i) out(i, i) += distortion_power(spec, var[i]);
    return out;
  }

  if (rng == nullptr) throw std::invalid_argument("multibit_output_covariance: monte-carlo needs a stream");
  if (draws == 0) throw std::invalid_argument("multibit_output_covariance: zero draws");
  Eigen::LDLT<CMat> ldlt(cz);
  const double scale = std::max(1.0, cz.cwiseAbs().maxCoeff());
  const RVec diag = ldlt.vectorD().real();
  if (ldlt.info() != Eigen::Success || (diag.array() < -1e-12 * scale).any()) {
    throw std::domain_error("multibit_output_covariance: covariance is not positive semidefinite");
  }
  const RVec sqrt_d = diag.cwiseMax(0.0).cwiseSqrt();
  const CMat lower = ldlt.matrixL();
  CMat factor = lower * sqrt_d.asDiagonal();
  factor = ldlt.transpositionsP().transpose() * factor;

  CMat acc = CMat::Zero(n, n);
  CVec w(n);
  CVec q(n);
  for (std::size_t d = 0; d < draws; ++d) {
    for (Eigen::Index i = 0; i < n; ++i) w[i] = rng->complex_normal();
    const CVec z = factor * w;
    for (Eigen::Index i = 0; i < n; ++i) q[i] = quantize(z[i], spec);
    acc.noalias() += q * q.adjoint();
  }
  return acc / static_cast<double>(draws);
}

}  // namespace qmimo
