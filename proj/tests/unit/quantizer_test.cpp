// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "qmimo/quantizer.hpp"
#include "qmimo/rng.hpp"

namespace qmimo {
namespace {

constexpr int kB = 8;
constexpr double kOsr = 4.0;

TEST(Quantizer, LabelsAndThresholds) {
  const QuantizerSpec q = make_quantizer(2, 1.0, 1.0);
  EXPECT_EQ(q.labels, (std::vector<double>{-1.5, -0.5, 0.5, 1.5}));
  EXPECT_EQ(q.thresholds, (std::vector<double>{-1.0, 0.0, 1.0}));
}

TEST(Quantizer, OneBitCalibrationIsExact) {
  for (double sigma2 : {0.01, 0.3, 2.0}) {
    const QuantizerSpec q = calibrate(1, default_step(1, sigma2), sigma2, kB, kOsr);
    EXPECT_NEAR(q.alpha * q.step, std::sqrt(2.0 / (kB * kOsr)), 1e-14);
  }
}

TEST(Quantizer, ExamplesFromTable) {
  const QuantizerSpec q1 = calibrate(1, 0.7, 0.5, kB, kOsr);
  const cplx y = quantize({0.3, -0.2}, q1);
  const double half = q1.alpha * q1.step / 2.0;
  EXPECT_DOUBLE_EQ(y.real(), half);
  EXPECT_DOUBLE_EQ(y.imag(), -half);

  const QuantizerSpec q2 = make_quantizer(2, 1.0, 1.0);
  EXPECT_EQ(quantize({0.4, 10.0}, q2), cplx(0.5, 1.5));
}

TEST(Quantizer, ThresholdTiesMapUpward) {
  const QuantizerSpec q = make_quantizer(2, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(q.quantize_real(-1.0), -0.5);
  EXPECT_DOUBLE_EQ(q.quantize_real(0.0), 0.5);
  EXPECT_DOUBLE_EQ(q.quantize_real(1.0), 1.5);
  EXPECT_DOUBLE_EQ(make_quantizer(1, 1.0, 1.0).quantize_real(0.0), 0.5);
}

TEST(Quantizer, AnalyticCalibrationTolerance) {
  for (int bits : {1, 2, 3, 4, 6}) {
    const double sigma2 = 0.37;
    const QuantizerSpec q = calibrate(bits, default_step(bits, sigma2), sigma2, kB, kOsr);
    EXPECT_NEAR(output_power(q, sigma2), 1.0 / (kB * kOsr), 1e-10) << bits;
  }
}

TEST(Quantizer, ThreeBitCalibrationMonteCarlo) {
  const double sigma2 = 1.0 / (kB * kOsr);
  const QuantizerSpec q = calibrate(3, default_step(3, sigma2), sigma2, kB, kOsr);
  RandomStream rng(11);
  const long n = 10'000'000;
  double acc = 0.0;
  for (long i = 0; i < n; ++i) acc += std::norm(quantize(rng.complex_normal(sigma2), q));
  EXPECT_NEAR(acc / n * kB * kOsr, 1.0, 1e-3);
}

TEST(Quantizer, CalibrationScaleInvariance) {
  const double step = 0.4;
  const double sigma2 = 0.2;
  const QuantizerSpec a = calibrate(3, step, sigma2, kB, kOsr);
  const QuantizerSpec b = calibrate(3, 2.0 * step, 4.0 * sigma2, kB, kOsr);
  EXPECT_NEAR(b.alpha, a.alpha / 2.0, 1e-12 * a.alpha);
}

TEST(Quantizer, MmseSteps) {
  // Max's table for a unit-variance Gaussian.
  EXPECT_NEAR(mmse_step(1), std::sqrt(8.0 / kPi), 1e-6);
  EXPECT_NEAR(mmse_step(2), 0.9957, 1e-3);
  EXPECT_NEAR(mmse_step(3), 0.5860, 1e-3);
  EXPECT_NEAR(default_step(3, 2.0), mmse_step(3), 1e-12);
}

TEST(Quantizer, RejectsInvalidParameters) {
  EXPECT_THROW(calibrate(3, 0.0, 1.0, kB, kOsr), ConfigError);
  EXPECT_THROW(calibrate(3, 1.0, 0.0, kB, kOsr), ConfigError);
  EXPECT_THROW(make_quantizer(0, 1.0, 1.0), ConfigError);
  const QuantizerSpec q = make_quantizer(2, 1.0, 1.0);
  EXPECT_THROW(bussgang_gain(q, 0.0), ConfigError);
  EXPECT_THROW(bussgang_gain(q, -1.0), ConfigError);
}

TEST(Quantizer, OddSymmetryAndMonotonicity) {
  RandomStream rng(3);
  for (int bits : {1, 2, 3, 5}) {
    const QuantizerSpec q = make_quantizer(bits, 0.3, 1.7);
    for (int i = 0; i < 2000; ++i) {
      const cplx z = rng.complex_normal(2.0);
      EXPECT_EQ(quantize(-z, q), -quantize(z, q));
    }
    double prev = -1e300;
    for (double x = -5.0; x <= 5.0; x += 1e-3) {
      const double y = q.quantize_real(x);
      EXPECT_GE(y, prev);
      prev = y;
    }
  }
}

TEST(BussgangGain, OneBitClosedForm) {
  const QuantizerSpec q = make_quantizer(1, 0.8, 1.3);
  const double sigma2 = 0.45;
  EXPECT_NEAR(bussgang_gain(q, sigma2), q.alpha * q.step / (std::sqrt(kPi) * std::sqrt(sigma2)),
              1e-14);
}

TEST(BussgangGain, VectorizedMatchesScalar) {
  const QuantizerSpec q = make_quantizer(3, 0.3, 1.1);
  RVec v(3);
  v << 0.1, 0.5, 2.0;
  const RVec g = bussgang_gains(q, v);
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(g(i), bussgang_gain(q, v(i)));
}

class GainOracle : public ::testing::TestWithParam<int> {};

TEST_P(GainOracle, MatchesMonteCarlo) {
  const int bits = GetParam();
  const double sigma2 = 0.6;
  const QuantizerSpec q = calibrate(bits, default_step(bits, sigma2), sigma2, kB, kOsr);
  RandomStream rng(100 + bits);
  const long n = 10'000'000;
  cplx cross = 0.0;
  double power = 0.0;
  for (long i = 0; i < n; ++i) {
    const cplx z = rng.complex_normal(sigma2);
    cross += quantize(z, q) * std::conj(z);
    power += std::norm(z);
  }
  const double mc = cross.real() / power;
  EXPECT_NEAR(mc / bussgang_gain(q, sigma2), 1.0, 5e-3);
}

INSTANTIATE_TEST_SUITE_P(Bits, GainOracle, ::testing::Values(1, 3));

TEST(BussgangGain, DistortionOrthogonalToInput) {
  const double sigma2 = 1.0;
  const QuantizerSpec q = calibrate(3, default_step(3, sigma2), sigma2, kB, kOsr);
  const double g = bussgang_gain(q, sigma2);
  RandomStream rng(7);
  const long n = 10'000'000;
  cplx dz = 0.0;
  double dd = 0.0;
  double zz = 0.0;
  for (long i = 0; i < n; ++i) {
    const cplx z = rng.complex_normal(sigma2);
    const cplx d = quantize(z, q) - g * z;
    dz += d * std::conj(z);
    dd += std::norm(d);
    zz += std::norm(z);
  }
  EXPECT_LT(std::abs(dz) / std::sqrt(dd * zz), 0.01);
  EXPECT_NEAR(dd / n, distortion_power(q, sigma2), 0.01 * distortion_power(q, sigma2));
}

TEST(Arcsine, DiagonalMeetsPowerConstraint) {
  CMat cz(3, 3);
  cz << 2.0, cplx(0.3, 0.1), 0.0, cplx(0.3, -0.1), 1.0, cplx(0.0, 0.2), 0.0, cplx(0.0, -0.2), 0.5;
  const int S = 16, B = 8, N = 64;
  const CMat cq = arcsine_covariance(cz, S, B, N);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(cq(i, i).real(), static_cast<double>(S) / (B * N), 1e-15);
    EXPECT_NEAR(cq(i, i).imag(), 0.0, 1e-15);
  }
}

TEST(Arcsine, DiagonalInputGivesDiagonalOutput) {
  const CMat cz = RVec::LinSpaced(4, 0.5, 2.0).cast<cplx>().asDiagonal();
  const CMat cq = arcsine_covariance(cz, 16, 8, 64);
  EXPECT_LT((cq - CMat(cq.diagonal().asDiagonal())).norm(), 1e-15);
}

TEST(Arcsine, CorrelatedPairMatchesSignQuantizer) {
  // Complex correlation 0.6 * e^{j pi/5}.
  const cplx rho = std::polar(0.6, kPi / 5.0);
  CMat cz(2, 2);
  cz << 1.0, rho, std::conj(rho), 1.0;
  const QuantizerSpec q = make_quantizer(1, 1.0, 1.0);
  const CMat analytic = arcsine_covariance(cz, q);

  Eigen::LLT<CMat> llt(cz);
  const CMat Lc = llt.matrixL();
  RandomStream rng(21);
  const long n = 10'000'000;
  cplx acc = 0.0;
  for (long i = 0; i < n; ++i) {
    CVec w(2);
    w << rng.complex_normal(), rng.complex_normal();
    const CVec z = Lc * w;
    acc += quantize(z(0), q) * std::conj(quantize(z(1), q));
  }
  const cplx mc = acc / static_cast<double>(n);
  EXPECT_NEAR(mc.real() / analytic(0, 1).real(), 1.0, 0.01);
  EXPECT_NEAR(mc.imag() / analytic(0, 1).imag(), 1.0, 0.01);
}

TEST(Arcsine, RejectsInvalidInput) {
  CMat cz = CMat::Identity(2, 2);
  cz(1, 1) = 0.0;
  EXPECT_THROW(arcsine_covariance(cz, 16, 8, 64), std::domain_error);
  EXPECT_THROW(arcsine_covariance(CMat::Identity(2, 2), make_quantizer(2, 1.0, 1.0)),
               std::invalid_argument);
  EXPECT_DOUBLE_EQ(arcsine_correlation(1.5), 1.0);
}

CMat correlated4() {
  CMat a(4, 4);
  a << 1.0, cplx(0.2, 0.1), cplx(-0.1, 0.3), 0.05,  //
      cplx(0.3, -0.2), 0.8, cplx(0.1, 0.0), cplx(0.0, -0.2),  //
      cplx(0.0, 0.1), cplx(0.2, 0.2), 1.2, cplx(0.3, 0.0),  //
      cplx(0.1, 0.0), cplx(-0.2, 0.1), cplx(0.0, 0.1), 0.7;
  return 0.25 * a * a.adjoint();
}

TEST(Multibit, DiagonalInputMethodsAgree) {
  const RVec var = RVec::LinSpaced(3, 0.2, 0.6);
  const CMat cz = var.cast<cplx>().asDiagonal();
  const QuantizerSpec q = calibrate(3, default_step(3, 0.4), 0.4, kB, kOsr);
  const CMat diag = multibit_output_covariance(cz, q, MultibitMethod::diagonal_distortion);
  RandomStream rng(5);
  const CMat mc = multibit_output_covariance(cz, q, MultibitMethod::monte_carlo, &rng, 1'000'000);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(diag(i, i).real(), output_power(q, var(i)), 1e-14);
    EXPECT_NEAR(mc(i, i).real() / diag(i, i).real(), 1.0, 5e-3);
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      EXPECT_EQ(diag(i, j), cplx(0.0));
      EXPECT_LT(std::abs(mc(i, j)), 5e-3 * diag(i, i).real());
    }
  }
}

TEST(Multibit, CorrelatedDiagonalsMatchMonteCarlo) {
  const CMat cz = correlated4();
  const double mean_var = cz.diagonal().real().mean();
  const QuantizerSpec q = calibrate(3, default_step(3, mean_var), mean_var, kB, kOsr);
  const CMat diag = multibit_output_covariance(cz, q, MultibitMethod::diagonal_distortion);
  RandomStream rng(9);
  const CMat mc = multibit_output_covariance(cz, q, MultibitMethod::monte_carlo, &rng, 1'000'000);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(mc(i, i).real() / diag(i, i).real(), 1.0, 5e-3) << i;
}

TEST(Multibit, HighResolutionLimit) {
  const CMat cz = correlated4();
  const QuantizerSpec q = make_quantizer(12, default_step(12, cz.diagonal().real().mean()), 1.0);
  const CMat cq = multibit_output_covariance(cz, q, MultibitMethod::diagonal_distortion);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      EXPECT_LE(std::abs(cq(i, j) - cz(i, j)), 1e-3 * std::abs(cz(i, j)) + 1e-15) << i << "," << j;
    }
  }
}

TEST(Multibit, RejectsInvalidInput) {
  const QuantizerSpec q = make_quantizer(3, 0.5, 1.0);
  EXPECT_THROW(multibit_output_covariance(CMat::Identity(2, 2), make_quantizer(1, 1.0, 1.0),
                                          MultibitMethod::diagonal_distortion),
               std::invalid_argument);
  CMat bad = CMat::Identity(2, 2);
  bad(0, 1) = bad(1, 0) = 3.0;
  RandomStream rng(1);
  EXPECT_THROW(multibit_output_covariance(bad, q, MultibitMethod::monte_carlo, &rng, 100),
               std::domain_error);
  EXPECT_THROW(multibit_output_covariance(CMat::Identity(2, 2), q, MultibitMethod::monte_carlo),
               std::invalid_argument);
}

}  // namespace
}  // namespace qmimo
