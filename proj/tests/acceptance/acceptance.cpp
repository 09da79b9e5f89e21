// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "qmimo/bussgang.hpp"
#include "qmimo/channel.hpp"
#include "qmimo/config.hpp"
#include "qmimo/experiments.hpp"
#include "qmimo/montecarlo.hpp"
#include "qmimo/quantizer.hpp"

using namespace qmimo;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Desk-scale system: N = 64 at the full-scale sampling rate.
ExperimentConfig desk_config() {
  ExperimentConfig c;
  c.grid.samples_per_symbol = 64;
  c.grid.occupied_subcarriers = 16;
  c.grid.subcarrier_spacing_hz = 240e3;
  c.grid.cp_len = 32;
  c.grid.antennas = 8;
  c.grid.users = 2;
  c.channel.aods_deg = {25.0, 55.0};
  c.channel.distances_m = {90.0, 65.0};
  c.channel.taps = 10;
  c.filter = FilterConfig{2, 1.6875e6, true, false};
  validate(c);
  return c;
}

Outcome criterion1() {
  const ExperimentConfig c = desk_config();
  const SystemGrid grid = derive_grid(c.grid);
  const FilterChain chain = sampled_response(grid, c.filter);
  const int realizations = 100;
  const int symbols = 50;
  const std::uint64_t seed = 101;

  std::vector<double> analytic(grid.meas_bins(), 0.0);
  SpectrumAverage empirical(grid.B, grid.meas_bins());
  SimulationOptions opt;
  opt.constellation = Constellation::gaussian;
  opt.render_waveform = true;
  for (int r = 0; r < realizations; ++r) {
    RandomStream crng = RandomStream::derive(seed, Substream::channel, r);
    const Transmitter tx = build_transmitter(
        c, grid, chain, 1,
        draw_channel(grid, c.channel.aods_deg, c.channel.distances_m, c.channel.taps, crng));
    const LinearizedModel model = build_linearized_model(tx.precoder, chain, tx.quantizer, grid);
    const auto a = analytical_psd_mean(model, chain, grid);
    for (std::size_t i = 0; i < a.size(); ++i) analytic[i] += a[i] / realizations;
    for (int s = 0; s < symbols; ++s) {
      RandomStream srng = RandomStream::derive(seed, Substream::symbols, r, s);
      RandomStream nrng = RandomStream::derive(seed, Substream::noise, r, s);
      const TrialResult t = simulate_symbol(tx, 0.0, srng, nrng, opt);
      empirical.add(waveform_periodogram(t.tx_waveform, grid));
    }
  }
  const auto e = empirical.mean();
  const int bins = grid.meas_bins();
  double ref = 0.0;
  for (int p = -grid.S / 2; p <= grid.S / 2; ++p) ref += analytic[p + bins / 2];
  ref /= grid.S + 1;
  double worst = 0.0;
  int counted = 0;
  for (int i = 0; i < bins; ++i) {
    if (analytic[i] <= ref * 1e-4) continue;
    ++counted;
    worst = std::max(worst, std::abs(to_db(e[i]) - to_db(analytic[i])));
  }
  return {worst <= 0.5, fmt("max |analytical - empirical| = %.3f dB", worst) + " over " +
                            std::to_string(counted) + " bins above -40 dBc (" +
                            std::to_string(realizations) + " x " + std::to_string(symbols) + ")"};
}

Outcome criterion2() {
  const double sigma2 = 1.0 / 48.0;
  double worst = 0.0;
  std::string detail;
  for (int bits : {1, 2, 3}) {
    const QuantizerSpec spec = calibrate(bits, default_step(bits, sigma2), sigma2, 16, 3.0);
    RandomStream rng = RandomStream::derive(7, Substream::oracle, bits);
    const long n = 10'000'000;
    double cross = 0.0;
    double power = 0.0;
    for (long i = 0; i < n; ++i) {
      const cplx z = rng.complex_normal(sigma2);
      cross += (quantize(z, spec) * std::conj(z)).real();
      power += std::norm(z);
    }
    const double mc = cross / power;
    const double rel = std::abs(bussgang_gain(spec, sigma2) / mc - 1.0);
    worst = std::max(worst, rel);
    detail += "Q=" + std::to_string(bits) + fmt(": %.4f%% ", 100.0 * rel);
  }
  return {worst < 0.005, "relative gain error " + detail + "(10^7 samples each)"};
}

Outcome criterion3() {
  // Quantizer output power along the full transmit chain, averaged over
  // realizations and symbols.
  ExperimentConfig c = desk_config();
  const SystemGrid grid = derive_grid(c.grid);
  const FilterChain chain = sampled_response(grid, c.filter);
  const double target = grid.per_antenna_power();
  double worst = 0.0;
  std::string detail;
  for (int bits : {1, 2, 3, 4}) {
    double acc = 0.0;
    long count = 0;
    for (int r = 0; r < 100; ++r) {
      RandomStream crng = RandomStream::derive(303, Substream::channel, r);
      const Transmitter tx = build_transmitter(
          c, grid, chain, bits,
          draw_channel(grid, c.channel.aods_deg, c.channel.distances_m, c.channel.taps, crng));
      const QuantizerSpec& q = *tx.quantizer;
      for (int s = 0; s < 20; ++s) {
        RandomStream srng = RandomStream::derive(303, Substream::symbols, r, s);
        const SymbolFrame f = draw_symbols(grid, Constellation::qpsk, srng);
        const SignalMatrix z = form_dac_input(f, tx.precoder, tx.dpd, tx.xi);
        for (Eigen::Index i = 0; i < z.size(); ++i) acc += std::norm(quantize(z.data()[i], q));
        count += z.size();
      }
    }
    const double rel = std::abs(acc / count / target - 1.0);
    worst = std::max(worst, rel);
    detail += "Q=" + std::to_string(bits) + fmt(": %.3f%% ", 100.0 * rel);
  }
  return {worst < 0.01, "deviation from 1/(B*OSR): " + detail};
}

Outcome criterion4() {
  ExperimentConfig c = desk_config();
  const SystemGrid grid = derive_grid(c.grid);
  const FilterChain chain = sampled_response(grid, FilterConfig{0, 0.0, true, false});
  double worst = 0.0;
  SimulationOptions opt;
  opt.render_waveform = true;
  for (int r = 0; r < 10; ++r) {
    RandomStream crng = RandomStream::derive(404, Substream::channel, r);
    const Transmitter tx = build_transmitter(
        c, grid, chain, 1,
        draw_channel(grid, c.channel.aods_deg, c.channel.distances_m, c.channel.taps, crng));
    for (int s = 0; s < 10; ++s) {
      RandomStream srng = RandomStream::derive(404, Substream::symbols, r, s);
      RandomStream nrng = RandomStream::derive(404, Substream::noise, r, s);
      const TrialResult t = simulate_symbol(tx, 0.0, srng, nrng, opt);
      for (double p : t.par_per_antenna) worst = std::max(worst, std::abs(to_db(p)));
    }
  }
  return {worst == 0.0, fmt("max |PAR| over 100 symbols x 8 antennas = %.3g dB", worst)};
}

Outcome criterion5() {
  ExperimentConfig c = desk_config();
  const SystemGrid grid = derive_grid(c.grid);
  const FilterChain chain = sampled_response(grid, FilterConfig{0, 0.0, true, true});
  double residual = 0.0;
  const std::vector<double> snr_db{0.0, 4.0, 8.0};
  std::vector<double> n0s;
  for (double s : snr_db) n0s.push_back(from_db(-s));
  std::vector<long> errors(n0s.size(), 0);
  std::vector<double> closed(n0s.size(), 0.0);
  long bits = 0;
  const int realizations = 50;
  const int symbols = 100;
  for (int r = 0; r < realizations; ++r) {
    RandomStream crng = RandomStream::derive(505, Substream::channel, r);
    const Transmitter tx = assemble_transmitter(
        grid, chain, std::nullopt,
        draw_channel(grid, c.channel.aods_deg, c.channel.distances_m, c.channel.taps, crng));
    const double gain = tx.xi * tx.precoder.norm_const;
    for (std::size_t j = 0; j < n0s.size(); ++j) {
      closed[j] += (1.0 - normal_cdf(std::sqrt(gain * gain / n0s[j]))) / realizations;
    }
    {
      RandomStream srng = RandomStream::derive(505, Substream::symbols, r, 999);
      RandomStream nrng = RandomStream::derive(505, Substream::noise, r, 999);
      const TrialResult t = simulate_symbol(tx, 0.0, srng, nrng);
      for (int k : grid.occupied) {
        for (int u = 0; u < grid.U; ++u) {
          residual = std::max(residual, std::abs(t.rx_symbols(u, k) - gain * t.symbols(u, k)) / gain);
        }
      }
    }
    for (int s = 0; s < symbols; ++s) {
      RandomStream srng = RandomStream::derive(505, Substream::symbols, r, s);
      RandomStream nrng = RandomStream::derive(505, Substream::noise, r, s);
      const BerCounts bc = simulate_ber(tx, n0s, srng, nrng);
      for (std::size_t j = 0; j < n0s.size(); ++j) errors[j] += bc.errors[j];
      bits += bc.bits;
    }
  }
  bool ok = residual < 1e-9;
  std::string detail = fmt("interference residual %.2e; ", residual);
  for (std::size_t j = 0; j < n0s.size(); ++j) {
    const double p = closed[j];
    const double mc = static_cast<double>(errors[j]) / bits;
    // Bits within a symbol share the channel, so allow 4 binomial sigmas.
    const double sigma = std::sqrt(p * (1.0 - p) / bits);
    ok = ok && std::abs(mc - p) <= 4.0 * sigma;
    detail += fmt("SNR %.0f dB: ", snr_db[j]) + fmt("MC %.4e", mc) + fmt(" vs %.4e; ", p);
  }
  return {ok, detail};
}

ExperimentConfig full_scale() {
  ExperimentConfig c;  // defaults: N=1024, S=300, B=64, U=4, L=10, 100 realizations
  c.trials.simulate = false;
  return c;
}

Outcome criterion6() {
  ExperimentConfig c = full_scale();
  c.dac.bits = {3};
  c.ber_filters = {FilterConfig{1, 2.25e6, true, false}, FilterConfig{0, 0.0, true, true}};
  c.ber_snr_db = Range{-15.0, 10.0, 0.25};
  const auto curves = compute_ber(c, RunContext{606, 1});
  const auto lp = snr_at_ber(curves[0], 1e-3);
  const auto ideal = snr_at_ber(curves[1], 1e-3);
  if (!lp || !ideal) return {false, "BER 1e-3 not reached on the SNR grid"};
  const double loss = *lp - *ideal;
  return {std::abs(loss - 0.7) <= 0.3,
          fmt("loss at BER 1e-3 = %.2f dB", loss) + fmt(" (eta=1 at %.2f dB", *lp) +
              fmt(", ideal at %.2f dB)", *ideal)};
}

Outcome criterion7() {
  ExperimentConfig c = full_scale();
  c.dac.bits = {3};
  c.tradeoff_orders = {2};
  c.tradeoff_f_cut_hz = Range{1.125e6, 1.125e6, 1.0};
  const auto pts = compute_tradeoff(c, RunContext{707, 1});
  const double gain = pts[0].aclr_db - pts[1].aclr_db;
  const double loss = pts[0].sindr_db - pts[1].sindr_db;
  return {gain >= 12.0 && std::abs(loss - 6.0) <= 2.0,
          fmt("ACLR improvement %.2f dB", gain) + fmt(", SINDR loss %.2f dB", loss) +
              fmt(" (no-LP ACLR %.2f dB", pts[0].aclr_db) + fmt(", SINDR %.2f dB)", pts[0].sindr_db)};
}

Outcome criterion8() {
  ExperimentConfig c = full_scale();
  c.dac.bits = {1, 3};
  const auto curves = compute_psd(c, RunContext{808, 1});
  const SystemGrid grid = derive_grid(c.grid);
  const int dc = grid.meas_bins() / 2;
  const double one = to_db(curves[1].analytical[dc]);
  const double three = to_db(curves[2].analytical[dc]);
  const double gap = one - three;
  return {std::abs(gap - 10.0) <= 2.0,
          fmt("DC bin: 1-bit %.2f dB", one) + fmt(", 3-bit %.2f dB", three) + fmt(", gap %.2f dB", gap)};
}

Outcome criterion9() {
  ExperimentConfig c = full_scale();
  c.dac.bits = {1};
  c.radiation_antennas = {16, 64};
  const auto curves = compute_radiation(c, RunContext{909, 1});
  double worst = -1e300;
  int violations = 0;
  for (std::size_t i = 0; i < curves[0].phi_deg.size(); ++i) {
    const double d = to_db(curves[1].adjacent[i]) - to_db(curves[0].adjacent[i]);
    worst = std::max(worst, d);
    if (curves[1].adjacent[i] > curves[0].adjacent[i]) ++violations;
  }
  return {violations == 0 && curves[0].phi_deg.size() == 181,
          std::to_string(curves[0].phi_deg.size()) + " directions, max (B=64 - B=16) = " +
              fmt("%.2f dB", worst) + ", violations " + std::to_string(violations)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome criterion10() {
  ExperimentConfig c = desk_config();
  c.trials.realizations = 4;
  c.trials.symbols_per_realization = 3;
  c.ber_snr_db = Range{-5.0, 5.0, 5.0};
  c.tradeoff_f_cut_hz = Range{1.125e6, 2.25e6, 1.125e6};
  c.radiation_antennas = {8};
  const auto base = std::filesystem::temp_directory_path() / "qmimo_acceptance_determinism";
  std::filesystem::remove_all(base);
  int compared = 0;
  for (const auto& recipe : recipe_names()) {
    const auto a = run_recipe(recipe, c, RunContext{1010, 1}, base / "a");
    const auto b = run_recipe(recipe, c, RunContext{1010, 2}, base / "b");
    if (a.size() != b.size()) return {false, recipe + ": different file sets"};
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].extension() != ".csv") continue;
      if (slurp(a[i]) != slurp(b[i]) || slurp(a[i]).empty()) {
        return {false, a[i].filename().string() + " differs between runs"};
      }
      ++compared;
    }
  }
  std::filesystem::remove_all(base);
  return {true, std::to_string(compared) + " CSV files byte-identical across two runs (1 and 2 threads)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"arcsine PSD exactness (desk scale, 1-bit)", criterion1},
      {"Bussgang gain oracle", criterion2},
      {"quantizer output power constraint", criterion3},
      {"1-bit ZOH-only PAR is 0 dB", criterion4},
      {"infinite-resolution sanity", criterion5},
      {"BER loss of eta=1, f_cut=2.25 MHz (3-bit)", criterion6},
      {"ACLR/SINDR tradeoff at eta=2, f_cut=1.125 MHz (3-bit)", criterion7},
      {"DC-bin gap 1-bit vs 3-bit", criterion8},
      {"adjacent-channel radiation, B=64 vs B=16", criterion9},
      {"determinism", criterion10},
  };
  // Optional subset: acceptance 3 6 8
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("CRITERION %d %s: %s -- %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL",
                criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
