// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: JSON ingestion, validation and the desk-scale
// profile. Unknown keys are rejected so typos surface as ConfigError.

#ifndef QMIMO_CONFIG_HPP
#define QMIMO_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qmimo/quantizer.hpp"
#include "qmimo/recon_filters.hpp"
#include "qmimo/sysgrid.hpp"

namespace qmimo {

struct ChannelConfig {
  std::vector<double> aods_deg{25.0, 55.0, 75.0, 100.0};
  std::vector<double> distances_m{90.0, 65.0, 115.0, 150.0};
  int taps = 10;
};

struct DacConfig {
  std::vector<int> bits{1, 3};
  std::optional<double> step;  // empty: MMSE step at the nominal input power
  MultibitMethod multibit = MultibitMethod::diagonal_distortion;
  std::size_t mc_frames = 2000;
};

struct TrialConfig {
  int realizations = 100;
  int symbols_per_realization = 10;
  bool simulate = true;  // Monte-Carlo markers next to the analytical curves
};

struct Range {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;
  std::vector<double> values() const;  // start, start + step, ... <= stop (+tolerance)
};

struct Sweep {
  std::string parameter;       // empty: single point
  std::vector<double> values;
};

struct ExperimentConfig {
  GridParams grid;
  ChannelConfig channel;
  DacConfig dac;
  FilterConfig filter{2, 1.6875e6, true, false};
  TrialConfig trials;
  Sweep sweep;

  // ber recipe
  std::vector<FilterConfig> ber_filters{{1, 2.25e6, true, false},
                                        {2, 1.6875e6, true, false},
                                        {0, 0.0, true, true}};
  Range ber_snr_db{-10.0, 20.0, 1.0};

  // radiation recipe
  std::vector<int> radiation_antennas{16, 64};
  double radiation_phi_step_deg = 1.0;

  // tradeoff recipe
  std::vector<int> tradeoff_orders{1, 2};
  Range tradeoff_f_cut_hz{562.5e3, 4.5e6, 562.5e3};
  double tradeoff_snr_db = 10.0;
};

// Sweepable parameter names.
inline const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names{"f_cut_hz", "order", "B", "snr_db"};
  return names;
}

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
void validate(const ExperimentConfig& config);

// 20 realizations and B = 16, for quick runs.
ExperimentConfig desk_scale(ExperimentConfig config);

// Copy of the config with the sweep parameter set to value.
ExperimentConfig at_sweep_point(const ExperimentConfig& config, double value);

}  // namespace qmimo

#endif  // QMIMO_CONFIG_HPP
