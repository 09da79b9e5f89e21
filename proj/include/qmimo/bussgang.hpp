// SPDX-License-Identifier: Apache-2.0
//
// Bussgang linearization of the quantized transmit chain and the closed-form
// metrics built on it (SINDR, BER, PSD, ACLR, radiation pattern).
//
// The stacked DAC input z (antenna fastest, index b + nB) has covariance
//
//   C_z = (F^H (x) I_B) blockdiag(A_0, ..., A_{N-1}) (F (x) I_B),
//   A_k = xi^2 |r_k|^-2 P_k P_k^H on occupied bins, 0 on guard bins,
//
// so C_z is block circulant with time-lag blocks c[tau] = (1/N) sum_k
// e^{+j 2 pi k tau / N} A_k. The quantizer output covariance inherits the
// circulant structure; its per-subcarrier blocks are
//
//   Cq[k] = sum_tau q[tau] e^{-j 2 pi k tau / N},
//
// where q[tau] is the output covariance at lag tau. For 1-bit DACs q[tau]
// follows from c[tau] through the arcsine law, evaluated entrywise with one
// batched length-N FFT per (b, b') pair. Nothing of size BN x BN is formed.

#ifndef QMIMO_BUSSGANG_HPP
#define QMIMO_BUSSGANG_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qmimo/common.hpp"
#include "qmimo/precoder.hpp"
#include "qmimo/quantizer.hpp"
#include "qmimo/recon_filters.hpp"
#include "qmimo/sysgrid.hpp"

namespace qmimo {

struct LinearizationOptions {
  MultibitMethod multibit = MultibitMethod::diagonal_distortion;
  // Gaussian symbol frames simulated by MultibitMethod::monte_carlo.
  std::size_t mc_frames = 2000;
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
};

struct LinearizedModel {
  std::optional<QuantizerSpec> quantizer;  // empty: infinite resolution
  double xi = 1.0;
  std::vector<cplx> response;  // r_k
  std::vector<cplx> dpd;       // 1 / r_k on occupied bins
  RVec gain;                   // per-antenna Bussgang gain
  CMat sample_covariance;      // C_{z_n}
  std::vector<CMat> input_spectrum;   // A_k
  std::vector<CMat> output_spectrum;  // Cq[k]

  int N() const { return static_cast<int>(response.size()); }
  int B() const { return static_cast<int>(gain.size()); }
  // Cq[k] - G A_k G.
  CMat distortion_block(int k) const;
  // Covariance of the reconstructed signal on subcarrier k, |r_k|^2 Cq[k].
  CMat transmit_block(int k) const;
};

// Builds the model for one channel realization. The DPD coefficients and xi
// are derived from the precoder and the filter chain.
LinearizedModel build_linearized_model(const PrecoderSet& precoder, const FilterChain& chain,
                                       const std::optional<QuantizerSpec>& quantizer,
                                       const SystemGrid& grid,
                                       const LinearizationOptions& options = {});

// Time-lag blocks c[tau] from per-subcarrier blocks, and back.
std::vector<CMat> lag_blocks(std::span<const CMat> spectrum);
std::vector<CMat> spectrum_blocks(std::span<const CMat> lags);

// Dense references for small systems (index b + nB).
CMat dense_input_covariance(const LinearizedModel& model);
// Diagonal blocks of (F (x) I_B) C (F^H (x) I_B) for a dense BN x BN matrix.
std::vector<CMat> dense_to_spectrum(const CMat& c, int B, int N);

struct SindrTerms {
  double signal = 0.0;
  double interference = 0.0;
  double distortion = 0.0;
};

// Ratio for a given noise level; +infinity when the denominator vanishes
// relative to the signal.
double sindr_value(const SindrTerms& terms, double n0);

// Terms for UE u on occupied subcarrier k. Rejects guard bins.
SindrTerms sindr_terms(int u, int k, std::span<const CMat> freq, const PrecoderSet& precoder,
                       const LinearizedModel& model);
double sindr(int u, int k, std::span<const CMat> freq, const PrecoderSet& precoder,
             const LinearizedModel& model, double n0);

// Terms for every (u, k in occupied), ordered k-major (u fastest).
std::vector<SindrTerms> sindr_terms_table(std::span<const CMat> freq, const PrecoderSet& precoder,
                                          const LinearizedModel& model, const SystemGrid& grid);

// 1 - mean Phi(sqrt(SINDR)).
double analytical_ber(std::span<const double> sindr_values);
double analytical_ber(std::span<const SindrTerms> terms, double n0);

// Mean linear SINDR over the table.
double mean_sindr(std::span<const SindrTerms> terms, double n0);

// Analog PSD of antenna b on the measurement grid: meas_factor * N bins,
// bin i at signed index p = i - meas_factor * N / 2 (frequency p * delta_f).
// Frequencies beyond +-f_s/2 use the periodic quantized-signal spectrum
// weighted by the analog response at the unwrapped frequency.
std::vector<double> analytical_psd(const LinearizedModel& model, const FilterChain& chain,
                                   const SystemGrid& grid, int b);
// Antenna-averaged analytical PSD on the measurement grid.
std::vector<double> analytical_psd_mean(const LinearizedModel& model, const FilterChain& chain,
                                        const SystemGrid& grid);
// Antenna-averaged PSD of the predistorted DAC input (digital, periodic in N).
std::vector<double> dac_input_psd_mean(const LinearizedModel& model, const SystemGrid& grid);

// In-band and adjacent-channel powers of a measurement-grid PSD.
struct BandPowers {
  double inband = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double aclr() const;  // max(lower, upper) / inband, linear
};
BandPowers band_powers(std::span<const double> psd, const SystemGrid& grid);

// (1/B) sum_b ACLR_b over the per-antenna analytical PSDs (linear).
double analytical_aclr(const LinearizedModel& model, const FilterChain& chain,
                       const SystemGrid& grid);

enum class Band { in_band, adjacent };

// Normalized band covariance: sum over the band's bins of |r_k|^2 Cq[k],
// divided by S + 1 (in-band, occupied plus DC) or 2S + 2 (both adjacent sets).
CMat band_covariance(const LinearizedModel& model, const SystemGrid& grid, Band band);

// Power radiated towards phi: power_scale * v(phi)^T C v(phi)^*.
double radiated_power(const CMat& band_cov, double phi_deg, double power_scale = 1.0);
std::vector<double> radiation_pattern(const CMat& band_cov, std::span<const double> phis_deg,
                                      double power_scale = 1.0);

}  // namespace qmimo

#endif  // QMIMO_BUSSGANG_HPP
