// SPDX-License-Identifier: Apache-2.0
//
// Time-domain simulation of the quantized downlink, used as an oracle for the
// closed-form engine.
//
// Per OFDM symbol: symbols -> precoding, DPD and xi -> IDFT -> quantizer ->
// reconstruction -> channel at rate f_s -> AWGN -> CP removal -> DFT ->
// QPSK sign detection.
//
// The UE front end is an ideal low-pass at f_s/2 followed by sampling at f_s,
// so subcarrier k of the received block sees the reconstruction response
// r_k exactly. The analog waveform itself is only rendered when PSD or PAR
// estimates are requested, on a grid oversampled by meas_factor:
//   - ZOH only: sample-and-hold of each DAC sample over meas_factor points;
//   - LP filter present: frequency-domain synthesis with the exact ZOH and
//     Butterworth responses over +-meas_factor * f_s / 2;
//   - ideal reconstruction: brick-wall spectrum on [-f_s/2, f_s/2).

#ifndef QMIMO_MONTECARLO_HPP
#define QMIMO_MONTECARLO_HPP

#include <optional>
#include <span>
#include <vector>

#include "qmimo/channel.hpp"
#include "qmimo/common.hpp"
#include "qmimo/precoder.hpp"
#include "qmimo/quantizer.hpp"
#include "qmimo/recon_filters.hpp"
#include "qmimo/rng.hpp"
#include "qmimo/sysgrid.hpp"

namespace qmimo {

// Everything fixed for one channel realization.
struct Transmitter {
  SystemGrid grid;
  FilterChain chain;
  std::optional<QuantizerSpec> quantizer;
  ChannelRealization channel;
  PrecoderSet precoder;
  std::vector<cplx> dpd;
  double xi = 1.0;
};

// Validates dimensions and that the cyclic prefix covers the channel memory
// plus the effective reconstruction-filter length.
Transmitter assemble_transmitter(const SystemGrid& grid, const FilterChain& chain,
                                 const std::optional<QuantizerSpec>& quantizer,
                                 ChannelRealization channel);

struct SimulationOptions {
  Constellation constellation = Constellation::qpsk;
  bool render_waveform = false;
};

struct TrialResult {
  SignalMatrix dac_input;    // B x N, z
  SignalMatrix tx_spectrum;  // B x N, r_k times the unitary DFT of Q(z)
  SignalMatrix tx_waveform;  // B x meas_factor (N + cp), empty unless rendered
  CMat rx_symbols;           // U x N received frequency-domain values
  CMat symbols;              // U x N transmitted symbols
  long bit_errors = 0;
  long bits = 0;
  std::vector<double> par_per_antenna;  // linear, only with a rendered waveform
};

TrialResult simulate_symbol(const Transmitter& tx, double n0, RandomStream& symbol_rng,
                            RandomStream& noise_rng, const SimulationOptions& options = {});

// Bit errors of one symbol at several noise levels, sharing the transmitted
// symbol and one unit-variance noise draw (common random numbers).
struct BerCounts {
  std::vector<long> errors;  // one entry per noise level
  long bits = 0;
};
BerCounts simulate_ber(const Transmitter& tx, std::span<const double> n0s,
                       RandomStream& symbol_rng, RandomStream& noise_rng,
                       Constellation constellation = Constellation::qpsk);

// U x N frequency-domain receiver noise: CN(0, n0) drawn in the time domain,
// then passed through the unitary DFT.
CMat receiver_noise(const SystemGrid& grid, double n0, RandomStream& rng);

// Per-UE linear convolution of the CP-extended transmit block with the taps,
// returning the U x N body after CP removal (noise-free).
CMat propagate(const ChannelRealization& channel, const SignalMatrix& tx_time, int cp_len);

// Analog waveform (B x meas_factor (N + cp)) of a quantized DAC block q (B x N).
SignalMatrix render_waveform(const SignalMatrix& q, const FilterChain& chain,
                             const SystemGrid& grid);

// 2N max(|Re|, |Im|)^2 / ||x||^2 over the DAC-rate samples of each antenna's
// symbol body. Throws std::domain_error for a zero waveform.
std::vector<double> par(const SignalMatrix& waveform, const SystemGrid& grid);
double par_db(std::span<const double> par_per_antenna);

// Periodogram of each antenna's waveform body on the measurement grid, scaled
// so that its expectation matches analytical_psd.
std::vector<std::vector<double>> waveform_periodogram(const SignalMatrix& waveform,
                                                      const SystemGrid& grid);
// Antenna-mean periodogram of the digital DAC input, repeated periodically
// over the measurement grid.
std::vector<double> dac_input_periodogram(const SignalMatrix& z, const SystemGrid& grid);

class SpectrumAverage {
 public:
  SpectrumAverage(int antennas, int bins);
  void add(const std::vector<std::vector<double>>& per_antenna);
  void merge(const SpectrumAverage& other);
  long count() const { return count_; }
  std::vector<std::vector<double>> per_antenna() const;
  std::vector<double> mean() const;

 private:
  std::vector<std::vector<double>> sum_;
  long count_ = 0;
};

// Mean over antennas of the per-antenna ACLR (linear).
double empirical_aclr(const std::vector<std::vector<double>>& per_antenna_psd,
                      const SystemGrid& grid);

// Sample band covariances from tx_spectrum blocks, normalized like
// band_covariance.
class BandCovarianceAverage {
 public:
  explicit BandCovarianceAverage(const SystemGrid& grid);
  void add(const SignalMatrix& tx_spectrum);
  CMat in_band() const;
  CMat adjacent() const;

 private:
  SystemGrid grid_;
  CMat in_band_;
  CMat adjacent_;
  long count_ = 0;
};

}  // namespace qmimo

#endif  // QMIMO_MONTECARLO_HPP
