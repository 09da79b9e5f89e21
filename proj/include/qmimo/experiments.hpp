// SPDX-License-Identifier: Apache-2.0
//
// Experiment recipes. Each recipe has a compute function returning the
// curves in memory and a run function that also writes CSV and a JSON
// summary. All randomness derives from RunContext::seed; realizations run in
// parallel and are reduced in index order, so outputs are byte-identical for
// a given seed regardless of the thread count.

#ifndef QMIMO_EXPERIMENTS_HPP
#define QMIMO_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qmimo/config.hpp"
#include "qmimo/montecarlo.hpp"

namespace qmimo {

struct RunContext {
  std::uint64_t seed = 1;
  int threads = 1;
};

// Quantizer calibrated at the nominal per-antenna input power 1 / (B * OSR),
// with the configured or MMSE step.
QuantizerSpec recipe_quantizer(const ExperimentConfig& config, int bits);

// Transmitter for one channel realization. The step comes from
// recipe_quantizer; alpha is recalibrated so that the mean output power over
// the antennas, given this realization's DAC-input variances, is exactly
// 1 / (B * OSR). bits = 0 selects infinite resolution.
Transmitter build_transmitter(const ExperimentConfig& config, const SystemGrid& grid,
                              const FilterChain& chain, int bits, ChannelRealization channel);

std::string filter_label(const FilterConfig& filter);

// --- PSD -----------------------------------------------------------------

struct PsdCurve {
  std::string setting;  // "dac_input" or "<Q>bit"
  int bits = 0;         // 0 for the DAC input
  std::vector<double> frequency_hz;
  std::vector<double> analytical;  // linear, antenna and realization mean
  std::vector<double> empirical;   // linear; empty without simulation
};

std::vector<PsdCurve> compute_psd(const ExperimentConfig& config, const RunContext& ctx);

// --- radiation -----------------------------------------------------------

struct RadiationCurve {
  int antennas = 0;
  double power_scale = 1.0;  // 1 / B
  std::vector<double> phi_deg;
  std::vector<double> in_band;   // linear
  std::vector<double> adjacent;  // linear
};

// Uses the first entry of dac.bits and the configured filter.
std::vector<RadiationCurve> compute_radiation(const ExperimentConfig& config, const RunContext& ctx);

// --- BER -----------------------------------------------------------------

struct BerCurve {
  std::string setting;
  int bits = 0;  // 0: infinite resolution
  FilterConfig filter;
  std::vector<double> snr_db;
  std::vector<double> analytical;
  std::vector<double> empirical;  // empty without simulation
  std::vector<long> bit_errors;
  long bits_simulated = 0;
};

// Settings: every dac.bits entry with every ber filter, plus an
// infinite-resolution ideal-reconstruction reference.
std::vector<BerCurve> compute_ber(const ExperimentConfig& config, const RunContext& ctx);

// SNR (dB) at which the analytical curve crosses target, interpolating
// log10(BER) linearly in SNR. Empty if the curve never crosses it.
std::optional<double> snr_at_ber(const BerCurve& curve, double target);

// --- tradeoff ------------------------------------------------------------

struct TradeoffPoint {
  int bits = 0;
  FilterConfig filter;
  double snr_db = 0.0;
  double aclr_db = 0.0;   // analytical
  double sindr_db = 0.0;  // analytical, mean linear SINDR in dB
  std::optional<double> empirical_aclr_db;
  std::optional<double> par_db;  // from simulated waveforms
};

// Per Q: a ZOH-only reference point followed by every (order, f_cut).
std::vector<TradeoffPoint> compute_tradeoff(const ExperimentConfig& config, const RunContext& ctx);

// --- CLI entry points ----------------------------------------------------

const std::vector<std::string>& recipe_names();

// Runs a recipe over the sweep and writes <recipe>*.csv and
// <recipe>_summary.json into out_dir. Returns the written paths.
std::vector<std::filesystem::path> run_recipe(const std::string& recipe,
                                              const ExperimentConfig& config,
                                              const RunContext& ctx,
                                              const std::filesystem::path& out_dir);

}  // namespace qmimo

#endif  // QMIMO_EXPERIMENTS_HPP
