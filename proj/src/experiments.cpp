// SPDX-License-Identifier: Apache-2.0

#include "qmimo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "qmimo/bussgang.hpp"
#include "qmimo/channel.hpp"
#include "qmimo/montecarlo.hpp"
#include "qmimo/parallel.hpp"

namespace qmimo {
namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string num(int v) { return std::to_string(v); }
std::string num(long v) { return std::to_string(v); }

std::string db_or_empty(const std::vector<double>& v, std::size_t i) {
  return v.empty() ? std::string() : num(to_db(v[i]));
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot open output file " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
    if (!out_) throw std::runtime_error("write failed for " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

// Columns describing the operating point, prefixed to every row.
std::vector<std::string> point_header() {
  return {"N", "S", "B", "U", "bits", "order", "f_cut_hz", "zoh", "ideal", "seed"};
}

std::vector<std::string> point_fields(const SystemGrid& g, int bits, const FilterConfig& f,
                                      std::uint64_t seed) {
  return {num(g.N),       num(g.S),          num(g.B),
          num(g.U),       num(bits),         num(f.order),
          num(f.f_cut_hz), f.zoh_enabled ? "1" : "0", f.ideal ? "1" : "0",
          std::to_string(seed)};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

ChannelRealization realization_channel(const ExperimentConfig& c, const SystemGrid& g,
                                       std::uint64_t seed, int r) {
  RandomStream rng = RandomStream::derive(seed, Substream::channel, static_cast<std::uint64_t>(r));
  return draw_channel(g, c.channel.aods_deg, c.channel.distances_m, c.channel.taps, rng);
}

LinearizationOptions linearization_options(const ExperimentConfig& c, std::uint64_t seed, int r) {
  LinearizationOptions o;
  o.multibit = c.dac.multibit;
  o.mc_frames = c.dac.mc_frames;
  o.seed = seed;
  o.stream_index = static_cast<std::uint64_t>(r);
  return o;
}

RandomStream symbol_stream(std::uint64_t seed, int r, int s) {
  return RandomStream::derive(seed, Substream::symbols, static_cast<std::uint64_t>(r),
                              static_cast<std::uint64_t>(s));
}

RandomStream noise_stream(std::uint64_t seed, int r, int s) {
  return RandomStream::derive(seed, Substream::noise, static_cast<std::uint64_t>(r),
                              static_cast<std::uint64_t>(s));
}

void add_into(std::vector<double>& acc, const std::vector<double>& v, double w = 1.0) {
  if (acc.empty()) acc.assign(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) acc[i] += w * v[i];
}

std::vector<double> meas_frequencies(const SystemGrid& g) {
  const int bins = g.meas_bins();
  std::vector<double> f(bins);
  for (int i = 0; i < bins; ++i) f[i] = (i - bins / 2) * g.subcarrier_spacing;
  return f;
}

std::vector<double> antenna_mean(const std::vector<std::vector<double>>& per_antenna) {
  std::vector<double> out(per_antenna.front().size(), 0.0);
  for (const auto& row : per_antenna) add_into(out, row);
  for (auto& v : out) v /= static_cast<double>(per_antenna.size());
  return out;
}

std::vector<double> phi_grid(double step) {
  std::vector<double> phis;
  for (long i = 0;; ++i) {
    const double phi = static_cast<double>(i) * step;
    if (phi > 180.0 + 1e-9) break;
    phis.push_back(phi);
  }
  return phis;
}

std::vector<double> sweep_values(const ExperimentConfig& c) {
  if (c.sweep.parameter.empty()) return {std::numeric_limits<double>::quiet_NaN()};
  return c.sweep.values;
}

ExperimentConfig point_config(const ExperimentConfig& c, double v) {
  return c.sweep.parameter.empty() ? c : at_sweep_point(c, v);
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

json sweep_tag(const ExperimentConfig& c, double v) {
  json j = json::object();
  if (!c.sweep.parameter.empty()) {
    j["parameter"] = c.sweep.parameter;
    j["value"] = v;
  }
  return j;
}

}  // namespace

QuantizerSpec recipe_quantizer(const ExperimentConfig& config, int bits) {
  const SystemGrid grid = derive_grid(config.grid);
  const double sigma2 = grid.per_antenna_power();
  const double step = config.dac.step ? *config.dac.step : default_step(bits, sigma2);
  return calibrate(bits, step, sigma2, grid.B, grid.osr());
}

Transmitter build_transmitter(const ExperimentConfig& config, const SystemGrid& grid,
                              const FilterChain& chain, int bits, ChannelRealization channel) {
  Transmitter tx = assemble_transmitter(grid, chain, std::nullopt, std::move(channel));
  if (bits == 0) return tx;
  const CMat czn = dac_input_covariance(tx.precoder, tx.dpd, tx.xi);
  std::vector<double> variances(grid.B);
  for (int b = 0; b < grid.B; ++b) variances[b] = czn(b, b).real();
  tx.quantizer = calibrate(bits, recipe_quantizer(config, bits).step, variances, grid.B, grid.osr());
  return tx;
}

std::string filter_label(const FilterConfig& f) {
  if (f.ideal) return "ideal";
  if (f.order == 0) return f.zoh_enabled ? "zoh_only" : "impulse";
  std::string s = "eta" + std::to_string(f.order) + "_fc" + num(f.f_cut_hz);
  if (!f.zoh_enabled) s += "_nozoh";
  return s;
}

// --- PSD -----------------------------------------------------------------

std::vector<PsdCurve> compute_psd(const ExperimentConfig& c, const RunContext& ctx) {
  const SystemGrid grid = derive_grid(c.grid);
  const FilterChain chain = sampled_response(grid, c.filter);
  const int nset = 1 + static_cast<int>(c.dac.bits.size());
  const int symbols = c.trials.symbols_per_realization;

  struct Partial {
    std::vector<std::vector<double>> analytical;
    std::vector<std::vector<double>> empirical;
  };

  auto per_realization = [&](int r) {
    Partial p;
    p.analytical.resize(nset);
    p.empirical.resize(nset);
    const ChannelRealization channel = realization_channel(c, grid, ctx.seed, r);
    for (std::size_t i = 0; i < c.dac.bits.size(); ++i) {
      const int bits = c.dac.bits[i];
      const Transmitter tx = build_transmitter(c, grid, chain, bits, channel);
      const LinearizedModel model = build_linearized_model(tx.precoder, chain, tx.quantizer, grid,
                                                           linearization_options(c, ctx.seed, r));
      if (i == 0) p.analytical[0] = dac_input_psd_mean(model, grid);
      p.analytical[i + 1] = analytical_psd_mean(model, chain, grid);
      if (!c.trials.simulate) continue;
      SimulationOptions opt;
      opt.render_waveform = true;
      for (int s = 0; s < symbols; ++s) {
        RandomStream srng = symbol_stream(ctx.seed, r, s);
        RandomStream nrng = noise_stream(ctx.seed, r, s);
        const TrialResult t = simulate_symbol(tx, 0.0, srng, nrng, opt);
        add_into(p.empirical[i + 1], antenna_mean(waveform_periodogram(t.tx_waveform, grid)));
        if (i == 0) add_into(p.empirical[0], dac_input_periodogram(t.dac_input, grid));
      }
    }
    return p;
  };

  const auto partials = parallel_map(c.trials.realizations, ctx.threads, per_realization);

  std::vector<PsdCurve> curves(nset);
  curves[0].setting = "dac_input";
  for (std::size_t i = 0; i < c.dac.bits.size(); ++i) {
    curves[i + 1].setting = std::to_string(c.dac.bits[i]) + "bit";
    curves[i + 1].bits = c.dac.bits[i];
  }
  const double inv_r = 1.0 / c.trials.realizations;
  const double inv_rs = inv_r / symbols;
  for (int s = 0; s < nset; ++s) {
    curves[s].frequency_hz = meas_frequencies(grid);
    for (const auto& p : partials) {
      add_into(curves[s].analytical, p.analytical[s], inv_r);
      if (c.trials.simulate) add_into(curves[s].empirical, p.empirical[s], inv_rs);
    }
  }
  return curves;
}

// --- radiation -----------------------------------------------------------

std::vector<RadiationCurve> compute_radiation(const ExperimentConfig& c, const RunContext& ctx) {
  const std::vector<double> phis = phi_grid(c.radiation_phi_step_deg);
  const int bits = c.dac.bits.front();
  std::vector<RadiationCurve> out;
  for (int B : c.radiation_antennas) {
    ExperimentConfig cb = c;
    cb.grid.antennas = B;
    validate(cb);
    const SystemGrid grid = derive_grid(cb.grid);
    const FilterChain chain = sampled_response(grid, cb.filter);
    const double scale = 1.0 / B;

    auto per_realization = [&](int r) {
      const ChannelRealization channel = realization_channel(cb, grid, ctx.seed, r);
      const Transmitter tx = build_transmitter(cb, grid, chain, bits, channel);
      const LinearizedModel model = build_linearized_model(
          tx.precoder, chain, tx.quantizer, grid, linearization_options(cb, ctx.seed, r));
      return std::pair{radiation_pattern(band_covariance(model, grid, Band::in_band), phis, scale),
                       radiation_pattern(band_covariance(model, grid, Band::adjacent), phis, scale)};
    };
    const auto partials = parallel_map(c.trials.realizations, ctx.threads, per_realization);

    RadiationCurve curve;
    curve.antennas = B;
    curve.power_scale = scale;
    curve.phi_deg = phis;
    const double inv_r = 1.0 / c.trials.realizations;
    for (const auto& [in, adj] : partials) {
      add_into(curve.in_band, in, inv_r);
      add_into(curve.adjacent, adj, inv_r);
    }
    out.push_back(std::move(curve));
  }
  return out;
}

// --- BER -----------------------------------------------------------------

std::vector<BerCurve> compute_ber(const ExperimentConfig& c, const RunContext& ctx) {
  const SystemGrid grid = derive_grid(c.grid);
  const std::vector<double> snrs = c.ber_snr_db.values();
  std::vector<double> n0s;
  for (double s : snrs) n0s.push_back(from_db(-s));

  std::vector<BerCurve> curves;
  for (int bits : c.dac.bits) {
    for (const auto& f : c.ber_filters) {
      BerCurve curve;
      curve.bits = bits;
      curve.filter = f;
      curve.setting = std::to_string(bits) + "bit_" + filter_label(f);
      curves.push_back(curve);
    }
  }
  BerCurve reference;
  reference.bits = 0;
  reference.filter = FilterConfig{0, 0.0, true, true};
  reference.setting = "inf_ideal";
  curves.push_back(reference);

  std::vector<FilterChain> chains;
  for (const auto& curve : curves) chains.push_back(sampled_response(grid, curve.filter));
  const int symbols = c.trials.symbols_per_realization;

  struct Partial {
    std::vector<std::vector<double>> ber;
    std::vector<std::vector<long>> errors;
  };
  auto per_realization = [&](int r) {
    Partial p;
    const ChannelRealization channel = realization_channel(c, grid, ctx.seed, r);
    for (std::size_t i = 0; i < curves.size(); ++i) {
      const Transmitter tx = build_transmitter(c, grid, chains[i], curves[i].bits, channel);
      const LinearizedModel model = build_linearized_model(
          tx.precoder, chains[i], tx.quantizer, grid, linearization_options(c, ctx.seed, r));
      const auto terms = sindr_terms_table(channel.freq, tx.precoder, model, grid);
      std::vector<double> ber;
      for (double n0 : n0s) ber.push_back(analytical_ber(terms, n0));
      p.ber.push_back(std::move(ber));
      std::vector<long> errors(n0s.size(), 0);
      if (c.trials.simulate) {
        for (int s = 0; s < symbols; ++s) {
          RandomStream srng = symbol_stream(ctx.seed, r, s);
          RandomStream nrng = noise_stream(ctx.seed, r, s);
          const BerCounts bc = simulate_ber(tx, n0s, srng, nrng);
          for (std::size_t j = 0; j < n0s.size(); ++j) errors[j] += bc.errors[j];
        }
      }
      p.errors.push_back(std::move(errors));
    }
    return p;
  };
  const auto partials = parallel_map(c.trials.realizations, ctx.threads, per_realization);

  const long bits_per_symbol = 2L * grid.U * grid.S;
  const double inv_r = 1.0 / c.trials.realizations;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    auto& curve = curves[i];
    curve.snr_db = snrs;
    curve.bit_errors.assign(snrs.size(), 0);
    for (const auto& p : partials) {
      add_into(curve.analytical, p.ber[i], inv_r);
      for (std::size_t j = 0; j < snrs.size(); ++j) curve.bit_errors[j] += p.errors[i][j];
    }
    if (c.trials.simulate) {
      curve.bits_simulated = bits_per_symbol * symbols * c.trials.realizations;
      for (long e : curve.bit_errors) {
        curve.empirical.push_back(static_cast<double>(e) / static_cast<double>(curve.bits_simulated));
      }
    }
  }
  return curves;
}

std::optional<double> snr_at_ber(const BerCurve& curve, double target) {
  const auto& s = curve.snr_db;
  const auto& b = curve.analytical;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (b[i] >= target && b[i + 1] < target) {
      if (!(b[i + 1] > 0.0)) return s[i + 1];
      const double l0 = std::log10(b[i]);
      const double l1 = std::log10(b[i + 1]);
      const double lt = std::log10(target);
      return s[i] + (lt - l0) / (l1 - l0) * (s[i + 1] - s[i]);
    }
  }
  return std::nullopt;
}

// --- tradeoff ------------------------------------------------------------

std::vector<TradeoffPoint> compute_tradeoff(const ExperimentConfig& c, const RunContext& ctx) {
  const SystemGrid grid = derive_grid(c.grid);
  const double n0 = from_db(-c.tradeoff_snr_db);
  const std::vector<double> fcuts = c.tradeoff_f_cut_hz.values();

  std::vector<TradeoffPoint> points;
  for (int bits : c.dac.bits) {
    TradeoffPoint ref;
    ref.bits = bits;
    ref.filter = FilterConfig{0, 0.0, true, false};
    ref.snr_db = c.tradeoff_snr_db;
    points.push_back(ref);
    for (int order : c.tradeoff_orders) {
      for (double fc : fcuts) {
        TradeoffPoint p = ref;
        p.filter = FilterConfig{order, fc, true, false};
        points.push_back(p);
      }
    }
  }
  std::vector<FilterChain> chains;
  for (const auto& p : points) chains.push_back(sampled_response(grid, p.filter));
  const int symbols = c.trials.symbols_per_realization;

  struct PointPartial {
    double aclr = 0.0;
    double sindr = 0.0;
    std::vector<BandPowers> bands;  // per antenna, summed over symbols
    double par_sum = 0.0;
  };
  auto per_realization = [&](int r) {
    std::vector<PointPartial> out(points.size());
    const ChannelRealization channel = realization_channel(c, grid, ctx.seed, r);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Transmitter tx = build_transmitter(c, grid, chains[i], points[i].bits, channel);
      const LinearizedModel model = build_linearized_model(
          tx.precoder, chains[i], tx.quantizer, grid, linearization_options(c, ctx.seed, r));
      out[i].aclr = analytical_aclr(model, chains[i], grid);
      out[i].sindr = mean_sindr(sindr_terms_table(channel.freq, tx.precoder, model, grid), n0);
      if (!c.trials.simulate) continue;
      out[i].bands.assign(grid.B, BandPowers{});
      SimulationOptions opt;
      opt.render_waveform = true;
      for (int s = 0; s < symbols; ++s) {
        RandomStream srng = symbol_stream(ctx.seed, r, s);
        RandomStream nrng = noise_stream(ctx.seed, r, s);
        const TrialResult t = simulate_symbol(tx, n0, srng, nrng, opt);
        const auto psd = waveform_periodogram(t.tx_waveform, grid);
        for (int b = 0; b < grid.B; ++b) {
          const BandPowers bp = band_powers(psd[b], grid);
          out[i].bands[b].inband += bp.inband;
          out[i].bands[b].lower += bp.lower;
          out[i].bands[b].upper += bp.upper;
        }
        double mean_par = 0.0;
        for (double v : t.par_per_antenna) mean_par += v;
        out[i].par_sum += mean_par / static_cast<double>(t.par_per_antenna.size());
      }
    }
    return out;
  };
  const auto partials = parallel_map(c.trials.realizations, ctx.threads, per_realization);

  const double R = c.trials.realizations;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double aclr = 0.0;
    double sindr = 0.0;
    double par_sum = 0.0;
    std::vector<BandPowers> bands(grid.B);
    for (const auto& p : partials) {
      aclr += p[i].aclr;
      sindr += p[i].sindr;
      par_sum += p[i].par_sum;
      for (std::size_t b = 0; b < p[i].bands.size(); ++b) {
        bands[b].inband += p[i].bands[b].inband;
        bands[b].lower += p[i].bands[b].lower;
        bands[b].upper += p[i].bands[b].upper;
      }
    }
    points[i].aclr_db = to_db(aclr / R);
    points[i].sindr_db = to_db(sindr / R);
    if (c.trials.simulate) {
      double e = 0.0;
      for (const auto& bp : bands) e += bp.aclr();
      points[i].empirical_aclr_db = to_db(e / grid.B);
      points[i].par_db = to_db(par_sum / (R * symbols));
    }
  }
  return points;
}

// --- CLI entry points ----------------------------------------------------

const std::vector<std::string>& recipe_names() {
  static const std::vector<std::string> names{"psd", "radiation", "ber", "tradeoff"};
  return names;
}

namespace {

// Mean in-band level of a measurement-grid PSD (occupied bins plus DC).
double inband_mean(const std::vector<double>& psd, const SystemGrid& g) {
  const int bins = g.meas_bins();
  double acc = 0.0;
  for (int p = -g.S / 2; p <= g.S / 2; ++p) acc += psd[static_cast<std::size_t>(p + bins / 2)];
  return acc / (g.S + 1);
}

std::vector<std::filesystem::path> run_psd(const ExperimentConfig& base, const RunContext& ctx,
                                           const std::filesystem::path& dir) {
  std::vector<std::unique_ptr<CsvWriter>> writers;
  std::vector<std::filesystem::path> files;
  json summary = json::array();
  for (double v : sweep_values(base)) {
    const ExperimentConfig c = point_config(base, v);
    const SystemGrid grid = derive_grid(c.grid);
    const auto curves = compute_psd(c, ctx);
    if (writers.empty()) {
      for (const auto& curve : curves) {
        files.push_back(dir / ("psd_" + curve.setting + ".csv"));
        writers.push_back(std::make_unique<CsvWriter>(
            files.back(), concat(concat({"setting"}, point_header()),
                                 {"frequency_hz", "analytical_db", "empirical_db"})));
      }
    }
    json point = sweep_tag(base, v);
    const int dc = grid.meas_bins() / 2;
    for (std::size_t s = 0; s < curves.size(); ++s) {
      const auto& curve = curves[s];
      const auto prefix = concat({curve.setting}, point_fields(grid, curve.bits, c.filter, ctx.seed));
      for (std::size_t i = 0; i < curve.frequency_hz.size(); ++i) {
        writers[s]->row(concat(prefix, {num(curve.frequency_hz[i]), num(to_db(curve.analytical[i])),
                                        db_or_empty(curve.empirical, i)}));
      }
      json js;
      js["dc_bin_analytical_db"] = to_db(curve.analytical[dc]);
      js["inband_mean_analytical_db"] = to_db(inband_mean(curve.analytical, grid));
      if (!curve.empirical.empty()) {
        const double ref = inband_mean(curve.analytical, grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < curve.analytical.size(); ++i) {
          if (curve.analytical[i] > ref * 1e-4) {
            worst = std::max(worst, std::abs(to_db(curve.empirical[i]) - to_db(curve.analytical[i])));
          }
        }
        js["max_abs_deviation_db_above_minus40dbc"] = worst;
      }
      point["settings"][curve.setting] = js;
    }
    summary.push_back(point);
  }
  files.push_back(dir / "psd_summary.json");
  write_json(files.back(), summary);
  return files;
}

std::vector<std::filesystem::path> run_radiation(const ExperimentConfig& base, const RunContext& ctx,
                                                 const std::filesystem::path& dir) {
  const auto csv = dir / "radiation.csv";
  CsvWriter w(csv, concat(point_header(), {"power_scale", "phi_deg", "in_band_db", "adjacent_db"}));
  json summary = json::array();
  for (double v : sweep_values(base)) {
    const ExperimentConfig c = point_config(base, v);
    const auto curves = compute_radiation(c, ctx);
    json point = sweep_tag(base, v);
    for (const auto& curve : curves) {
      ExperimentConfig cb = c;
      cb.grid.antennas = curve.antennas;
      const SystemGrid grid = derive_grid(cb.grid);
      const auto prefix = point_fields(grid, c.dac.bits.front(), c.filter, ctx.seed);
      std::vector<double> peaks;
      for (std::size_t i = 0; i < curve.phi_deg.size(); ++i) {
        w.row(concat(prefix, {num(curve.power_scale), num(curve.phi_deg[i]),
                              num(to_db(curve.in_band[i])), num(to_db(curve.adjacent[i]))}));
        if (i > 0 && i + 1 < curve.phi_deg.size() && curve.in_band[i] > curve.in_band[i - 1] &&
            curve.in_band[i] >= curve.in_band[i + 1]) {
          peaks.push_back(curve.phi_deg[i]);
        }
      }
      json js;
      js["antennas"] = curve.antennas;
      js["in_band_local_maxima_deg"] = peaks;
      js["adjacent_mean_db"] =
          to_db(std::accumulate(curve.adjacent.begin(), curve.adjacent.end(), 0.0) / curve.adjacent.size());
      point["curves"].push_back(js);
    }
    summary.push_back(point);
  }
  const auto js = dir / "radiation_summary.json";
  write_json(js, summary);
  return {csv, js};
}

std::vector<std::filesystem::path> run_ber(const ExperimentConfig& base, const RunContext& ctx,
                                           const std::filesystem::path& dir) {
  const auto csv = dir / "ber.csv";
  CsvWriter w(csv, concat(concat({"setting"}, point_header()),
                          {"snr_db", "analytical_ber", "empirical_ber", "bit_errors", "bits_simulated"}));
  json summary = json::array();
  for (double v : sweep_values(base)) {
    const ExperimentConfig c = point_config(base, v);
    const SystemGrid grid = derive_grid(c.grid);
    const auto curves = compute_ber(c, ctx);
    json point = sweep_tag(base, v);
    for (const auto& curve : curves) {
      const auto prefix = concat({curve.setting}, point_fields(grid, curve.bits, curve.filter, ctx.seed));
      for (std::size_t i = 0; i < curve.snr_db.size(); ++i) {
        w.row(concat(prefix, {num(curve.snr_db[i]), num(curve.analytical[i]),
                              curve.empirical.empty() ? "" : num(curve.empirical[i]),
                              curve.empirical.empty() ? "" : num(curve.bit_errors[i]),
                              curve.empirical.empty() ? "" : num(curve.bits_simulated)}));
      }
      const auto at = snr_at_ber(curve, 1e-3);
      point["snr_db_at_ber_1e-3"][curve.setting] = at ? json(*at) : json(nullptr);
    }
    summary.push_back(point);
  }
  const auto js = dir / "ber_summary.json";
  write_json(js, summary);
  return {csv, js};
}

std::vector<std::filesystem::path> run_tradeoff(const ExperimentConfig& base, const RunContext& ctx,
                                                const std::filesystem::path& dir) {
  const auto csv = dir / "tradeoff.csv";
  CsvWriter w(csv, concat(point_header(), {"snr_db", "aclr_db", "sindr_db", "par_db", "empirical_aclr_db"}));
  json summary = json::array();
  for (double v : sweep_values(base)) {
    const ExperimentConfig c = point_config(base, v);
    const SystemGrid grid = derive_grid(c.grid);
    const auto points = compute_tradeoff(c, ctx);
    json point = sweep_tag(base, v);
    const TradeoffPoint* ref = nullptr;
    for (const auto& p : points) {
      w.row(concat(point_fields(grid, p.bits, p.filter, ctx.seed),
                   {num(p.snr_db), num(p.aclr_db), num(p.sindr_db), p.par_db ? num(*p.par_db) : "",
                    p.empirical_aclr_db ? num(*p.empirical_aclr_db) : ""}));
      if (p.filter.order == 0) {
        ref = &p;
        continue;
      }
      json js;
      js["bits"] = p.bits;
      js["filter"] = filter_label(p.filter);
      js["aclr_gain_db"] = ref->aclr_db - p.aclr_db;
      js["sindr_loss_db"] = ref->sindr_db - p.sindr_db;
      point["relative_to_zoh_only"].push_back(js);
    }
    summary.push_back(point);
  }
  const auto js = dir / "tradeoff_summary.json";
  write_json(js, summary);
  return {csv, js};
}

}  // namespace

std::vector<std::filesystem::path> run_recipe(const std::string& recipe,
                                              const ExperimentConfig& config,
                                              const RunContext& ctx,
                                              const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());
  if (recipe == "psd") return run_psd(config, ctx, out_dir);
  if (recipe == "radiation") return run_radiation(config, ctx, out_dir);
  if (recipe == "ber") return run_ber(config, ctx, out_dir);
  if (recipe == "tradeoff") return run_tradeoff(config, ctx, out_dir);
  throw ConfigError("unknown recipe '" + recipe + "'");
}

}  // namespace qmimo
