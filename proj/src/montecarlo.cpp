// SPDX-License-Identifier: Apache-2.0

#include "qmimo/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmimo/bussgang.hpp"
#include "qmimo/fft.hpp"

namespace qmimo {
namespace {

bool zoh_only(const FilterConfig& c) { return !c.ideal && c.order == 0 && c.zoh_enabled; }

// FFT-order index i of a length-n transform to its signed frequency index.
long fft_signed(int i, int n) { return i < n / 2 ? i : static_cast<long>(i) - n; }

void quantize_in_place(SignalMatrix& z, const std::optional<QuantizerSpec>& q) {
  if (!q) return;
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = quantize(z.data()[i], *q);
}

long count_sign_errors(const CMat& rx, const CMat& symbols, std::span<const int> occupied) {
  long errors = 0;
  for (int k : occupied) {
    for (Eigen::Index u = 0; u < rx.rows(); ++u) {
      const cplx r = rx(u, k);
      const cplx s = symbols(u, k);
      errors += (r.real() < 0.0) != (s.real() < 0.0);
      errors += (r.imag() < 0.0) != (s.imag() < 0.0);
    }
  }
  return errors;
}

// Shared transmit path: returns z, Q(z) spectrum times r, and the noise-free
// frequency-domain receive block.
struct Noiseless {
  SymbolFrame frame;
  SignalMatrix z;
  SignalMatrix q;
  SignalMatrix tx_spectrum;
  CMat rx;
};

Noiseless transmit(const Transmitter& tx, RandomStream& symbol_rng, Constellation c) {
  const SystemGrid& g = tx.grid;
  Noiseless out;
  out.frame = draw_symbols(g, c, symbol_rng);
  out.z = form_dac_input(out.frame, tx.precoder, tx.dpd, tx.xi);
  out.q = out.z;
  quantize_in_place(out.q, tx.quantizer);

  out.tx_spectrum = out.q;
  fft::unitary_rows(out.tx_spectrum, fft::Direction::forward);
  for (int k = 0; k < g.N; ++k) out.tx_spectrum.col(k) *= tx.chain.response[k];

  SignalMatrix tx_time = out.tx_spectrum;
  fft::unitary_rows(tx_time, fft::Direction::backward);
  CMat y = propagate(tx.channel, tx_time, g.cp_len);
  SignalMatrix yf = y;
  fft::unitary_rows(yf, fft::Direction::forward);
  out.rx = yf;
  return out;
}

}  // namespace

Transmitter assemble_transmitter(const SystemGrid& grid, const FilterChain& chain,
                                 const std::optional<QuantizerSpec>& quantizer,
                                 ChannelRealization channel) {
  if (static_cast<int>(chain.response.size()) != grid.N ||
      static_cast<int>(channel.freq.size()) != grid.N) {
    throw ConfigError("transmitter: filter or channel does not match the grid");
  }
  if (channel.taps.empty() || channel.taps.front().rows() != grid.U ||
      channel.taps.front().cols() != grid.B) {
    throw ConfigError("transmitter: channel taps do not match U x B");
  }
  const int needed = (channel.L - 1) + effective_length_samples(chain);
  if (grid.cp_len < needed) {
    throw ConfigError("transmitter: cyclic prefix of " + std::to_string(grid.cp_len) +
                      " samples is shorter than channel memory plus filter length (" +
                      std::to_string(needed) + ")");
  }
  if (grid.cp_len > grid.N) throw ConfigError("transmitter: cyclic prefix longer than a symbol");
  Transmitter tx;
  tx.grid = grid;
  tx.chain = chain;
  tx.quantizer = quantizer;
  tx.channel = std::move(channel);
  tx.precoder = zf_precoder(tx.channel.freq, grid);
  tx.dpd = dpd_coefficients(chain, grid.occupied);
  tx.xi = power_rescale_xi(tx.precoder.matrices, chain.response, grid.occupied);
  return tx;
}

CMat propagate(const ChannelRealization& channel, const SignalMatrix& tx_time, int cp_len) {
  const Eigen::Index B = tx_time.rows();
  const Eigen::Index N = tx_time.cols();
  if (channel.L - 1 > cp_len) throw ConfigError("propagate: channel longer than the CP");
  SignalMatrix ext(B, N + cp_len);
  ext.rightCols(N) = tx_time;
  if (cp_len > 0) ext.leftCols(cp_len) = tx_time.rightCols(cp_len);
  const Eigen::Index U = channel.taps.front().rows();
  CMat y = CMat::Zero(U, N);
  for (int l = 0; l < channel.L; ++l) {
    y.noalias() += channel.taps[l] * ext.middleCols(cp_len - l, N);
  }
  return y;
}

CMat receiver_noise(const SystemGrid& grid, double n0, RandomStream& rng) {
  if (n0 < 0.0) throw ConfigError("noise: N0 must be nonnegative");
  SignalMatrix w(grid.U, grid.N);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.complex_normal(1.0);
  fft::unitary_rows(w, fft::Direction::forward);
  return std::sqrt(n0) * CMat(w);
}

TrialResult simulate_symbol(const Transmitter& tx, double n0, RandomStream& symbol_rng,
                            RandomStream& noise_rng, const SimulationOptions& options) {
  Noiseless nl = transmit(tx, symbol_rng, options.constellation);
  TrialResult r;
  r.rx_symbols = nl.rx + receiver_noise(tx.grid, n0, noise_rng);
  r.bits = 2L * tx.grid.U * tx.grid.S;
  r.bit_errors = count_sign_errors(r.rx_symbols, nl.frame.symbols, tx.grid.occupied);
  if (options.render_waveform) {
    r.tx_waveform = render_waveform(nl.q, tx.chain, tx.grid);
    r.par_per_antenna = par(r.tx_waveform, tx.grid);
  }
  r.symbols = std::move(nl.frame.symbols);
  r.dac_input = std::move(nl.z);
  r.tx_spectrum = std::move(nl.tx_spectrum);
  return r;
}

BerCounts simulate_ber(const Transmitter& tx, std::span<const double> n0s,
                       RandomStream& symbol_rng, RandomStream& noise_rng,
                       Constellation constellation) {
  const Noiseless nl = transmit(tx, symbol_rng, constellation);
  const CMat w = receiver_noise(tx.grid, 1.0, noise_rng);
  BerCounts out;
  out.bits = 2L * tx.grid.U * tx.grid.S;
  out.errors.reserve(n0s.size());
  for (double n0 : n0s) {
    if (n0 < 0.0) throw ConfigError("noise: N0 must be nonnegative");
    const CMat rx = nl.rx + std::sqrt(n0) * w;
    out.errors.push_back(count_sign_errors(rx, nl.frame.symbols, tx.grid.occupied));
  }
  return out;
}

SignalMatrix render_waveform(const SignalMatrix& q, const FilterChain& chain,
                             const SystemGrid& grid) {
  const int M = grid.meas_factor;
  const int N = grid.N;
  const int MN = M * N;
  const Eigen::Index B = q.rows();
  if (q.cols() != N) throw std::invalid_argument("render_waveform: expected N samples per row");

  SignalMatrix body(B, MN);
  if (zoh_only(chain.config)) {
    for (Eigen::Index b = 0; b < B; ++b) {
      for (int n = 0; n < N; ++n) body.row(b).segment(n * M, M).setConstant(q(b, n));
    }
  } else {
    SignalMatrix qf = q;
    fft::transform({qf.data(), static_cast<std::size_t>(qf.size())}, N, fft::Direction::forward);
    std::vector<cplx> weight(MN);
    for (int i = 0; i < MN; ++i) {
      weight[i] = static_cast<double>(M) / MN *
                  chain.analog_response(fft_signed(i, MN) * grid.subcarrier_spacing);
    }
    for (Eigen::Index b = 0; b < B; ++b) {
      for (int i = 0; i < MN; ++i) body(b, i) = weight[i] * qf(b, wrap_bin(fft_signed(i, MN), N));
    }
    fft::transform({body.data(), static_cast<std::size_t>(body.size())}, MN,
                   fft::Direction::backward);
  }

  const int cpm = grid.cp_len * M;
  SignalMatrix wave(B, cpm + MN);
  wave.rightCols(MN) = body;
  if (cpm > 0) wave.leftCols(cpm) = body.rightCols(cpm);
  return wave;
}

std::vector<double> par(const SignalMatrix& waveform, const SystemGrid& grid) {
  const int M = grid.meas_factor;
  const int start = grid.cp_len * M;
  if (waveform.cols() != start + M * grid.N) {
    throw std::invalid_argument("par: waveform length does not match the grid");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(waveform.rows()));
  for (Eigen::Index b = 0; b < waveform.rows(); ++b) {
    double peak = 0.0;
    double energy = 0.0;
    for (int n = 0; n < grid.N; ++n) {
      const cplx x = waveform(b, start + n * M);
      peak = std::max({peak, x.real() * x.real(), x.imag() * x.imag()});
      energy += std::norm(x);
    }
    if (!(energy > 0.0)) throw std::domain_error("par: zero-energy waveform");
    out.push_back(2.0 * grid.N * peak / energy);
  }
  return out;
}

double par_db(std::span<const double> par_per_antenna) {
  if (par_per_antenna.empty()) throw std::invalid_argument("par_db: no antennas");
  double acc = 0.0;
  for (double p : par_per_antenna) acc += p;
  return to_db(acc / static_cast<double>(par_per_antenna.size()));
}

std::vector<std::vector<double>> waveform_periodogram(const SignalMatrix& waveform,
                                                      const SystemGrid& grid) {
  const int M = grid.meas_factor;
  const int MN = M * grid.N;
  const int start = grid.cp_len * M;
  if (waveform.cols() != start + MN) {
    throw std::invalid_argument("waveform_periodogram: waveform length does not match the grid");
  }
  SignalMatrix body = waveform.rightCols(MN);
  fft::transform({body.data(), static_cast<std::size_t>(body.size())}, MN,
                 fft::Direction::forward);
  const double scale = 1.0 / (static_cast<double>(M) * M * grid.N);
  std::vector<std::vector<double>> out(waveform.rows(), std::vector<double>(MN));
  for (Eigen::Index b = 0; b < body.rows(); ++b) {
    for (int i = 0; i < MN; ++i) {
      out[b][static_cast<std::size_t>(fft_signed(i, MN) + MN / 2)] = scale * std::norm(body(b, i));
    }
  }
  return out;
}

std::vector<double> dac_input_periodogram(const SignalMatrix& z, const SystemGrid& grid) {
  SignalMatrix zf = z;
  fft::unitary_rows(zf, fft::Direction::forward);
  std::vector<double> per_bin(grid.N, 0.0);
  for (int k = 0; k < grid.N; ++k) per_bin[k] = zf.col(k).squaredNorm() / static_cast<double>(z.rows());
  const int bins = grid.meas_bins();
  std::vector<double> out(bins);
  for (int i = 0; i < bins; ++i) out[i] = per_bin[wrap_bin(i - bins / 2, grid.N)];
  return out;
}

SpectrumAverage::SpectrumAverage(int antennas, int bins)
    : sum_(antennas, std::vector<double>(bins, 0.0)) {}

void SpectrumAverage::add(const std::vector<std::vector<double>>& per_antenna) {
  if (per_antenna.size() != sum_.size()) throw std::invalid_argument("SpectrumAverage: antenna count");
  for (std::size_t b = 0; b < sum_.size(); ++b) {
    if (per_antenna[b].size() != sum_[b].size()) throw std::invalid_argument("SpectrumAverage: bins");
    for (std::size_t i = 0; i < sum_[b].size(); ++i) sum_[b][i] += per_antenna[b][i];
  }
  ++count_;
}

void SpectrumAverage::merge(const SpectrumAverage& other) {
  if (other.sum_.size() != sum_.size()) throw std::invalid_argument("SpectrumAverage: shape");
  for (std::size_t b = 0; b < sum_.size(); ++b) {
    for (std::size_t i = 0; i < sum_[b].size(); ++i) sum_[b][i] += other.sum_[b][i];
  }
  count_ += other.count_;
}

std::vector<std::vector<double>> SpectrumAverage::per_antenna() const {
  if (count_ == 0) throw std::logic_error("SpectrumAverage: no spectra added");
  auto out = sum_;
  for (auto& row : out) {
    for (auto& v : row) v /= static_cast<double>(count_);
  }
  return out;
}

std::vector<double> SpectrumAverage::mean() const {
  const auto pa = per_antenna();
  std::vector<double> out(pa.front().size(), 0.0);
  for (const auto& row : pa) {
    for (std::size_t i = 0; i < row.size(); ++i) out[i] += row[i];
  }
  for (auto& v : out) v /= static_cast<double>(pa.size());
  return out;
}

double empirical_aclr(const std::vector<std::vector<double>>& per_antenna_psd,
                      const SystemGrid& grid) {
  if (per_antenna_psd.empty()) throw std::invalid_argument("empirical_aclr: no antennas");
  double acc = 0.0;
  for (const auto& psd : per_antenna_psd) acc += band_powers(psd, grid).aclr();
  return acc / static_cast<double>(per_antenna_psd.size());
}

BandCovarianceAverage::BandCovarianceAverage(const SystemGrid& grid)
    : grid_(grid),
      in_band_(CMat::Zero(grid.B, grid.B)),
      adjacent_(CMat::Zero(grid.B, grid.B)) {}

void BandCovarianceAverage::add(const SignalMatrix& tx_spectrum) {
  for (int k : inband_with_dc(grid_)) {
    const CVec x = tx_spectrum.col(k);
    in_band_.noalias() += x * x.adjoint();
  }
  const AdjacentChannels adj = adjacent_channels(grid_);
  for (const auto* set : {&adj.lower, &adj.upper}) {
    for (int k : *set) {
      const CVec x = tx_spectrum.col(k);
      adjacent_.noalias() += x * x.adjoint();
    }
  }
  ++count_;
}

CMat BandCovarianceAverage::in_band() const {
  if (count_ == 0) throw std::logic_error("BandCovarianceAverage: empty");
  return in_band_ / (static_cast<double>(count_) * (grid_.S + 1));
}

CMat BandCovarianceAverage::adjacent() const {
  if (count_ == 0) throw std::logic_error("BandCovarianceAverage: empty");
  return adjacent_ / (static_cast<double>(count_) * (2 * grid_.S + 2));
}

}  // namespace qmimo
