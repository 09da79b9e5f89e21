// SPDX-License-Identifier: Apache-2.0

#include "qmimo/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qmimo {
namespace {

using nlohmann::json;

void allow_only(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError("config: '" + where + "' must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("config: unknown key '" + where + "." + item.key() + "'");
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config: bad value for '" + where + "." + key + "': " + e.what());
  }
}

Range read_range(const json& obj, const std::string& where, Range r) {
  allow_only(obj, where, {"start", "stop", "step"});
  read(obj, "start", r.start, where);
  read(obj, "stop", r.stop, where);
  read(obj, "step", r.step, where);
  return r;
}

FilterConfig read_filter(const json& obj, const std::string& where, FilterConfig f) {
  allow_only(obj, where, {"order", "f_cut_hz", "zoh", "ideal"});
  read(obj, "order", f.order, where);
  read(obj, "f_cut_hz", f.f_cut_hz, where);
  read(obj, "zoh", f.zoh_enabled, where);
  read(obj, "ideal", f.ideal, where);
  return f;
}

void validate_filter(const FilterConfig& f, const std::string& where) {
  if (f.ideal) return;
  if (f.order < 0 || f.order > 2) throw ConfigError("config: " + where + ".order must be 0, 1 or 2");
  if (f.order > 0 && !(f.f_cut_hz > 0.0)) {
    throw ConfigError("config: " + where + ".f_cut_hz must be positive");
  }
}

}  // namespace

std::vector<double> Range::values() const {
  if (!(step > 0.0)) throw ConfigError("config: range step must be positive");
  if (stop < start) throw ConfigError("config: range is empty (stop < start)");
  std::vector<double> out;
  const double tol = 1e-9 * step;
  for (long i = 0;; ++i) {
    const double v = start + static_cast<double>(i) * step;
    if (v > stop + tol) break;
    out.push_back(v);
  }
  return out;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  allow_only(root, "config",
             {"grid", "channel", "dac", "filter", "trials", "sweep", "ber", "radiation", "tradeoff"});

  ExperimentConfig c;
  if (root.contains("grid")) {
    const json& g = root["grid"];
    allow_only(g, "grid", {"N", "S", "subcarrier_spacing_hz", "cp_len", "B", "U", "meas_factor"});
    read(g, "N", c.grid.samples_per_symbol, "grid");
    read(g, "S", c.grid.occupied_subcarriers, "grid");
    read(g, "subcarrier_spacing_hz", c.grid.subcarrier_spacing_hz, "grid");
    read(g, "cp_len", c.grid.cp_len, "grid");
    read(g, "B", c.grid.antennas, "grid");
    read(g, "U", c.grid.users, "grid");
    read(g, "meas_factor", c.grid.meas_factor, "grid");
  }
  if (root.contains("channel")) {
    const json& ch = root["channel"];
    allow_only(ch, "channel", {"aods_deg", "distances_m", "taps"});
    read(ch, "aods_deg", c.channel.aods_deg, "channel");
    read(ch, "distances_m", c.channel.distances_m, "channel");
    read(ch, "taps", c.channel.taps, "channel");
  }
  if (root.contains("dac")) {
    const json& d = root["dac"];
    allow_only(d, "dac", {"bits", "step", "multibit_method", "mc_frames"});
    read(d, "bits", c.dac.bits, "dac");
    if (d.contains("step")) {
      if (d["step"].is_string() && d["step"] == "mmse") {
        c.dac.step.reset();
      } else if (d["step"].is_number()) {
        c.dac.step = d["step"].get<double>();
      } else {
        throw ConfigError("config: dac.step must be \"mmse\" or a number");
      }
    }
    if (d.contains("multibit_method")) {
      const std::string m = d["multibit_method"].is_string() ? d["multibit_method"].get<std::string>() : "";
      if (m == "diagonal_distortion") {
        c.dac.multibit = MultibitMethod::diagonal_distortion;
      } else if (m == "monte_carlo") {
        c.dac.multibit = MultibitMethod::monte_carlo;
      } else {
        throw ConfigError("config: dac.multibit_method must be diagonal_distortion or monte_carlo");
      }
    }
    read(d, "mc_frames", c.dac.mc_frames, "dac");
  }
  if (root.contains("filter")) c.filter = read_filter(root["filter"], "filter", c.filter);
  if (root.contains("trials")) {
    const json& t = root["trials"];
    allow_only(t, "trials", {"realizations", "symbols_per_realization", "simulate"});
    read(t, "realizations", c.trials.realizations, "trials");
    read(t, "symbols_per_realization", c.trials.symbols_per_realization, "trials");
    read(t, "simulate", c.trials.simulate, "trials");
  }
  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    allow_only(s, "sweep", {"parameter", "values", "start", "stop", "step"});
    read(s, "parameter", c.sweep.parameter, "sweep");
    if (s.contains("values")) {
      read(s, "values", c.sweep.values, "sweep");
    } else if (s.contains("start") || s.contains("stop") || s.contains("step")) {
      Range r{0.0, 0.0, 1.0};
      read(s, "start", r.start, "sweep");
      read(s, "stop", r.stop, "sweep");
      read(s, "step", r.step, "sweep");
      c.sweep.values = r.values();
    }
  }
  if (root.contains("ber")) {
    const json& b = root["ber"];
    allow_only(b, "ber", {"filters", "snr_db"});
    if (b.contains("filters")) {
      if (!b["filters"].is_array()) throw ConfigError("config: ber.filters must be an array");
      c.ber_filters.clear();
      for (const auto& f : b["filters"]) c.ber_filters.push_back(read_filter(f, "ber.filters", {}));
    }
    if (b.contains("snr_db")) c.ber_snr_db = read_range(b["snr_db"], "ber.snr_db", c.ber_snr_db);
  }
  if (root.contains("radiation")) {
    const json& r = root["radiation"];
    allow_only(r, "radiation", {"antennas", "phi_step_deg"});
    read(r, "antennas", c.radiation_antennas, "radiation");
    read(r, "phi_step_deg", c.radiation_phi_step_deg, "radiation");
  }
  if (root.contains("tradeoff")) {
    const json& t = root["tradeoff"];
    allow_only(t, "tradeoff", {"orders", "f_cut_hz", "snr_db"});
    read(t, "orders", c.tradeoff_orders, "tradeoff");
    if (t.contains("f_cut_hz")) {
      c.tradeoff_f_cut_hz = read_range(t["f_cut_hz"], "tradeoff.f_cut_hz", c.tradeoff_f_cut_hz);
    }
    read(t, "snr_db", c.tradeoff_snr_db, "tradeoff");
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const ExperimentConfig& c) {
  const SystemGrid grid = derive_grid(c.grid);
  if (static_cast<int>(c.channel.aods_deg.size()) != grid.U ||
      static_cast<int>(c.channel.distances_m.size()) != grid.U) {
    throw ConfigError("config: channel needs one AoD and one distance per UE (U = " +
                      std::to_string(grid.U) + ")");
  }
  if (c.channel.taps < 1) throw ConfigError("config: channel.taps must be at least 1");
  for (double d : c.channel.distances_m) {
    if (!(d > 0.0)) throw ConfigError("config: distances must be positive");
  }
  if (c.dac.bits.empty()) throw ConfigError("config: dac.bits must not be empty");
  for (int b : c.dac.bits) {
    if (b < 1 || b > 16) throw ConfigError("config: dac.bits entries must be in 1..16");
  }
  if (c.dac.step && !(*c.dac.step > 0.0)) throw ConfigError("config: dac.step must be positive");
  if (c.dac.mc_frames == 0) throw ConfigError("config: dac.mc_frames must be positive");
  validate_filter(c.filter, "filter");
  for (const auto& f : c.ber_filters) validate_filter(f, "ber.filters");
  if (c.trials.realizations < 1) throw ConfigError("config: trials.realizations must be >= 1");
  if (c.trials.symbols_per_realization < 1) {
    throw ConfigError("config: trials.symbols_per_realization must be >= 1");
  }
  if (!c.sweep.parameter.empty()) {
    const auto& names = sweep_parameters();
    if (std::find(names.begin(), names.end(), c.sweep.parameter) == names.end()) {
      throw ConfigError("config: unknown sweep parameter '" + c.sweep.parameter + "'");
    }
    if (c.sweep.values.empty()) throw ConfigError("config: sweep range is empty");
  } else if (!c.sweep.values.empty()) {
    throw ConfigError("config: sweep values given without a parameter");
  }
  (void)c.ber_snr_db.values();
  (void)c.tradeoff_f_cut_hz.values();
  if (c.radiation_antennas.empty()) throw ConfigError("config: radiation.antennas must not be empty");
  for (int b : c.radiation_antennas) {
    if (b < grid.U) throw ConfigError("config: radiation.antennas entries must be >= U");
  }
  if (!(c.radiation_phi_step_deg > 0.0)) throw ConfigError("config: radiation.phi_step_deg must be positive");
  for (int o : c.tradeoff_orders) {
    if (o < 1 || o > 2) throw ConfigError("config: tradeoff.orders entries must be 1 or 2");
  }
}

ExperimentConfig desk_scale(ExperimentConfig c) {
  c.grid.antennas = 16;
  c.trials.realizations = std::min(c.trials.realizations, 20);
  validate(c);
  return c;
}

ExperimentConfig at_sweep_point(const ExperimentConfig& config, double value) {
  ExperimentConfig c = config;
  const std::string& p = config.sweep.parameter;
  const auto as_int = [&](const char* what) {
    if (value != std::round(value)) throw ConfigError(std::string("sweep: ") + what + " must be an integer");
    return static_cast<int>(std::lround(value));
  };
  if (p == "f_cut_hz") {
    c.filter.f_cut_hz = value;
  } else if (p == "order") {
    c.filter.order = as_int("order");
  } else if (p == "B") {
    c.grid.antennas = as_int("B");
  } else if (p == "snr_db") {
    c.tradeoff_snr_db = value;
  } else if (!p.empty()) {
    throw ConfigError("sweep: unknown parameter '" + p + "'");
  }
  c.sweep = {};
  validate(c);
  return c;
}

}  // namespace qmimo
