// SPDX-License-Identifier: Apache-2.0

#include "qmimo/bussgang.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qmimo/channel.hpp"
#include "qmimo/fft.hpp"

namespace qmimo {
namespace {

// Packs N blocks of B x B into B*B contiguous sequences of length N.
std::vector<cplx> pack(std::span<const CMat> blocks) {
  const auto N = blocks.size();
  const auto B = static_cast<std::size_t>(blocks.front().rows());
  std::vector<cplx> buf(B * B * N);
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t j = 0; j < B; ++j) {
      for (std::size_t i = 0; i < B; ++i) buf[(i * B + j) * N + k] = blocks[k](i, j);
    }
  }
  return buf;
}

std::vector<CMat> unpack(const std::vector<cplx>& buf, std::size_t B, std::size_t N,
                         double scale) {
  std::vector<CMat> blocks(N, CMat(B, B));
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t j = 0; j < B; ++j) {
      for (std::size_t i = 0; i < B; ++i) blocks[k](i, j) = scale * buf[(i * B + j) * N + k];
    }
  }
  return blocks;
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

// 1-bit output spectrum via the lag-domain arcsine law.
std::vector<CMat> one_bit_spectrum(std::span<const CMat> input, const QuantizerSpec& spec) {
  const std::size_t N = input.size();
  const std::size_t B = static_cast<std::size_t>(input.front().rows());
  std::vector<cplx> buf = pack(input);
  fft::transform(buf, N, fft::Direction::backward);
  const double inv_n = 1.0 / static_cast<double>(N);
  for (auto& v : buf) v *= inv_n;

  std::vector<double> var(B);
  for (std::size_t b = 0; b < B; ++b) {
    var[b] = buf[(b * B + b) * N].real();
    if (!(var[b] > 0.0)) {
      throw std::domain_error("linearization: antenna " + std::to_string(b) +
                              " carries no power, 1-bit covariance undefined");
    }
  }
  const double amp = spec.alpha * spec.step;
  const double pref = amp * amp / kPi;
  for (std::size_t i = 0; i < B; ++i) {
    for (std::size_t j = 0; j < B; ++j) {
      const double norm = 1.0 / std::sqrt(var[i] * var[j]);
      cplx* seq = buf.data() + (i * B + j) * N;
      for (std::size_t t = 0; t < N; ++t) {
        const cplx kk = seq[t] * norm;
        seq[t] = pref * cplx(std::asin(clamp_unit(kk.real())), std::asin(clamp_unit(kk.imag())));
      }
      if (i == j) seq[0] = pref * (kPi / 2.0);  // zero-lag self term is exactly asin(1)
    }
  }
  fft::transform(buf, N, fft::Direction::forward);
  return unpack(buf, B, N, 1.0);
}

std::vector<CMat> simulated_spectrum(const PrecoderSet& precoder, const LinearizedModel& model,
                                     const SystemGrid& grid, const LinearizationOptions& opt) {
  if (opt.mc_frames == 0) throw ConfigError("linearization: mc_frames must be positive");
  const auto& spec = *model.quantizer;
  std::vector<CMat> acc(grid.N, CMat::Zero(grid.B, grid.B));
  RandomStream rng = RandomStream::derive(opt.seed, Substream::mc_covariance, opt.stream_index);
  for (std::size_t f = 0; f < opt.mc_frames; ++f) {
    const SymbolFrame frame = draw_symbols(grid, Constellation::gaussian, rng);
    SignalMatrix z = form_dac_input(frame, precoder, model.dpd, model.xi);
    for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = quantize(z.data()[i], spec);
    fft::unitary_rows(z, fft::Direction::forward);
    for (int k = 0; k < grid.N; ++k) {
      const CVec x = z.col(k);
      acc[k].noalias() += x * x.adjoint();
    }
  }
  const double inv = 1.0 / static_cast<double>(opt.mc_frames);
  for (auto& a : acc) a *= inv;
  return acc;
}

std::vector<int> signed_set(std::span<const int> bins, int N) {
  std::vector<int> out;
  out.reserve(bins.size());
  for (int k : bins) out.push_back(signed_bin(k, N));
  return out;
}

}  // namespace

CMat LinearizedModel::distortion_block(int k) const {
  const auto G = gain.asDiagonal();
  return output_spectrum.at(k) - G * input_spectrum.at(k) * G;
}

CMat LinearizedModel::transmit_block(int k) const {
  return std::norm(response.at(k)) * output_spectrum.at(k);
}

std::vector<CMat> lag_blocks(std::span<const CMat> spectrum) {
  const std::size_t N = spectrum.size();
  std::vector<cplx> buf = pack(spectrum);
  fft::transform(buf, N, fft::Direction::backward);
  return unpack(buf, static_cast<std::size_t>(spectrum.front().rows()), N,
                1.0 / static_cast<double>(N));
}

std::vector<CMat> spectrum_blocks(std::span<const CMat> lags) {
  const std::size_t N = lags.size();
  std::vector<cplx> buf = pack(lags);
  fft::transform(buf, N, fft::Direction::forward);
  return unpack(buf, static_cast<std::size_t>(lags.front().rows()), N, 1.0);
}

LinearizedModel build_linearized_model(const PrecoderSet& precoder, const FilterChain& chain,
                                       const std::optional<QuantizerSpec>& quantizer,
                                       const SystemGrid& grid,
                                       const LinearizationOptions& options) {
  if (static_cast<int>(precoder.matrices.size()) != grid.N ||
      static_cast<int>(chain.response.size()) != grid.N) {
    throw std::invalid_argument("linearization: precoder or filter does not match the grid");
  }
  LinearizedModel m;
  m.quantizer = quantizer;
  m.response = chain.response;
  m.dpd = dpd_coefficients(chain, grid.occupied);
  m.xi = power_rescale_xi(precoder.matrices, chain.response, grid.occupied);

  m.input_spectrum.assign(grid.N, CMat::Zero(grid.B, grid.B));
  for (int k : grid.occupied) {
    const CMat& p = precoder.matrices[k];
    m.input_spectrum[k] = (m.xi * m.xi * std::norm(m.dpd[k])) * (p * p.adjoint());
  }
  m.sample_covariance = CMat::Zero(grid.B, grid.B);
  for (const auto& a : m.input_spectrum) m.sample_covariance += a;
  m.sample_covariance /= static_cast<double>(grid.N);
  const RVec variances = m.sample_covariance.diagonal().real();

  if (!quantizer) {
    m.gain = RVec::Ones(grid.B);
    m.output_spectrum = m.input_spectrum;
    return m;
  }

  const QuantizerSpec& spec = *quantizer;
  if ((variances.array() <= 0.0).any()) {
    throw std::domain_error("linearization: an antenna carries no power");
  }
  m.gain = bussgang_gains(spec, variances);
  if (spec.bits == 1) {
    m.output_spectrum = one_bit_spectrum(m.input_spectrum, spec);
  } else if (options.multibit == MultibitMethod::diagonal_distortion) {
    RVec d(grid.B);
    for (int b = 0; b < grid.B; ++b) d[b] = distortion_power(spec, variances[b]);
    const auto G = m.gain.asDiagonal();
    m.output_spectrum.resize(grid.N);
    for (int k = 0; k < grid.N; ++k) {
      m.output_spectrum[k] = G * m.input_spectrum[k] * G;
      m.output_spectrum[k].diagonal() += d.cast<cplx>();
    }
  } else {
    m.output_spectrum = simulated_spectrum(precoder, m, grid, options);
  }
  return m;
}

CMat dense_input_covariance(const LinearizedModel& model) {
  const int N = model.N();
  const int B = model.B();
  const std::vector<CMat> lags = lag_blocks(model.input_spectrum);
  CMat c(B * N, B * N);
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < N; ++m) {
      c.block(n * B, m * B, B, B) = lags[((n - m) % N + N) % N];
    }
  }
  return c;
}

std::vector<CMat> dense_to_spectrum(const CMat& c, int B, int N) {
  if (c.rows() != B * N || c.cols() != B * N) {
    throw std::invalid_argument("dense_to_spectrum: size mismatch");
  }
  CMat f(N, N);
  const double s = 1.0 / std::sqrt(static_cast<double>(N));
  for (int k = 0; k < N; ++k) {
    for (int n = 0; n < N; ++n) {
      f(k, n) = std::polar(s, -2.0 * kPi * static_cast<double>((static_cast<long>(k) * n) % N) / N);
    }
  }
  CMat t = CMat::Zero(B * N, B * N);
  // (F (x) I_B) C (F^H (x) I_B), block by block.
  for (int k = 0; k < N; ++k) {
    for (int n = 0; n < N; ++n) t.block(k * B, 0, B, B * N) += f(k, n) * c.block(n * B, 0, B, B * N);
  }
  std::vector<CMat> out(N, CMat::Zero(B, B));
  for (int k = 0; k < N; ++k) {
    for (int m = 0; m < N; ++m) out[k] += std::conj(f(k, m)) * t.block(k * B, m * B, B, B);
  }
  return out;
}

double sindr_value(const SindrTerms& t, double n0) {
  const double den = t.interference + t.distortion + n0;
  if (den <= 1e-20 * t.signal) return std::numeric_limits<double>::infinity();
  return t.signal / den;
}

SindrTerms sindr_terms(int u, int k, std::span<const CMat> freq, const PrecoderSet& precoder,
                       const LinearizedModel& model) {
  if (k < 0 || k >= model.N() || model.dpd[k] == cplx(0.0)) {
    throw std::out_of_range("sindr: subcarrier " + std::to_string(k) + " is not occupied");
  }
  const CMat& h = freq[k];
  if (u < 0 || u >= h.rows()) throw std::out_of_range("sindr: UE index out of range");
  const auto hu = h.row(u);
  const CVec eff = (hu * model.gain.asDiagonal() * precoder.matrices[k]).transpose();
  SindrTerms t;
  const double xi2 = model.xi * model.xi;
  for (Eigen::Index v = 0; v < eff.size(); ++v) {
    const double p = xi2 * std::norm(eff[v]);
    if (v == u) {
      t.signal = p;
    } else {
      t.interference += p;
    }
  }
  if (model.quantizer) {
    const CMat cd = model.distortion_block(k);
    t.distortion = std::norm(model.response[k]) * (hu * cd * hu.adjoint())(0, 0).real();
  }
  return t;
}

double sindr(int u, int k, std::span<const CMat> freq, const PrecoderSet& precoder,
             const LinearizedModel& model, double n0) {
  return sindr_value(sindr_terms(u, k, freq, precoder, model), n0);
}

std::vector<SindrTerms> sindr_terms_table(std::span<const CMat> freq, const PrecoderSet& precoder,
                                          const LinearizedModel& model, const SystemGrid& grid) {
  std::vector<SindrTerms> out;
  out.reserve(static_cast<std::size_t>(grid.S) * grid.U);
  const double xi2 = model.xi * model.xi;
  for (int k : grid.occupied) {
    const CMat& h = freq[k];
    const CMat eff = h * model.gain.asDiagonal() * precoder.matrices[k];
    Eigen::VectorXd dist = Eigen::VectorXd::Zero(grid.U);
    if (model.quantizer) {
      const CMat cd = model.distortion_block(k);
      dist = std::norm(model.response[k]) * (h * cd * h.adjoint()).diagonal().real();
    }
    for (int u = 0; u < grid.U; ++u) {
      SindrTerms t;
      for (int v = 0; v < grid.U; ++v) {
        const double p = xi2 * std::norm(eff(u, v));
        if (v == u) {
          t.signal = p;
        } else {
          t.interference += p;
        }
      }
      t.distortion = dist[u];
      out.push_back(t);
    }
  }
  return out;
}

double analytical_ber(std::span<const double> sindr_values) {
  if (sindr_values.empty()) throw std::invalid_argument("analytical_ber: no SINDR values");
  double acc = 0.0;
  for (double s : sindr_values) {
    if (s < 0.0) throw std::invalid_argument("analytical_ber: negative SINDR");
    acc += std::isinf(s) ? 1.0 : normal_cdf(std::sqrt(s));
  }
  return 1.0 - acc / static_cast<double>(sindr_values.size());
}

double analytical_ber(std::span<const SindrTerms> terms, double n0) {
  std::vector<double> v;
  v.reserve(terms.size());
  for (const auto& t : terms) v.push_back(sindr_value(t, n0));
  return analytical_ber(v);
}

double mean_sindr(std::span<const SindrTerms> terms, double n0) {
  if (terms.empty()) throw std::invalid_argument("mean_sindr: empty table");
  double acc = 0.0;
  for (const auto& t : terms) acc += sindr_value(t, n0);
  return acc / static_cast<double>(terms.size());
}

std::vector<double> analytical_psd(const LinearizedModel& model, const FilterChain& chain,
                                   const SystemGrid& grid, int b) {
  if (b < 0 || b >= model.B()) throw std::out_of_range("analytical_psd: antenna out of range");
  const int bins = grid.meas_bins();
  std::vector<double> psd(bins);
  for (int i = 0; i < bins; ++i) {
    const long p = i - bins / 2;
    const int k = wrap_bin(p, grid.N);
    const double r2 = std::norm(chain.analog_response(static_cast<double>(p) * grid.subcarrier_spacing));
    psd[i] = r2 * model.output_spectrum[k](b, b).real();
  }
  return psd;
}

std::vector<double> analytical_psd_mean(const LinearizedModel& model, const FilterChain& chain,
                                        const SystemGrid& grid) {
  const int bins = grid.meas_bins();
  std::vector<double> psd(bins);
  for (int i = 0; i < bins; ++i) {
    const long p = i - bins / 2;
    const int k = wrap_bin(p, grid.N);
    const double r2 = std::norm(chain.analog_response(static_cast<double>(p) * grid.subcarrier_spacing));
    psd[i] = r2 * model.output_spectrum[k].diagonal().real().mean();
  }
  return psd;
}

std::vector<double> dac_input_psd_mean(const LinearizedModel& model, const SystemGrid& grid) {
  const int bins = grid.meas_bins();
  std::vector<double> psd(bins);
  for (int i = 0; i < bins; ++i) {
    const int k = wrap_bin(i - bins / 2, grid.N);
    psd[i] = model.input_spectrum[k].diagonal().real().mean();
  }
  return psd;
}

double BandPowers::aclr() const {
  if (!(inband > 0.0)) throw std::domain_error("aclr: no in-band power");
  return std::max(lower, upper) / inband;
}

BandPowers band_powers(std::span<const double> psd, const SystemGrid& grid) {
  const int bins = grid.meas_bins();
  if (static_cast<int>(psd.size()) != bins) {
    throw std::invalid_argument("band_powers: PSD does not cover the measurement grid");
  }
  const auto at = [&](int p) { return psd[static_cast<std::size_t>(p + bins / 2)]; };
  BandPowers bp;
  for (int p = -grid.S / 2; p <= grid.S / 2; ++p) bp.inband += at(p);
  const AdjacentChannels adj = adjacent_channels(grid);
  for (int p : signed_set(adj.lower, grid.N)) bp.lower += at(p);
  for (int p : signed_set(adj.upper, grid.N)) bp.upper += at(p);
  return bp;
}

double analytical_aclr(const LinearizedModel& model, const FilterChain& chain,
                       const SystemGrid& grid) {
  double acc = 0.0;
  for (int b = 0; b < model.B(); ++b) {
    acc += band_powers(analytical_psd(model, chain, grid, b), grid).aclr();
  }
  return acc / model.B();
}

CMat band_covariance(const LinearizedModel& model, const SystemGrid& grid, Band band) {
  CMat c = CMat::Zero(model.B(), model.B());
  if (band == Band::in_band) {
    for (int k : inband_with_dc(grid)) c += model.transmit_block(k);
    return c / static_cast<double>(grid.S + 1);
  }
  const AdjacentChannels adj = adjacent_channels(grid);
  for (int k : adj.lower) c += model.transmit_block(k);
  for (int k : adj.upper) c += model.transmit_block(k);
  return c / static_cast<double>(2 * grid.S + 2);
}

double radiated_power(const CMat& band_cov, double phi_deg, double power_scale) {
  const CVec v = steering_vector(phi_deg, static_cast<int>(band_cov.rows()));
  const cplx q = v.transpose() * band_cov * v.conjugate();
  return power_scale * q.real();
}

std::vector<double> radiation_pattern(const CMat& band_cov, std::span<const double> phis_deg,
                                      double power_scale) {
  std::vector<double> out;
  out.reserve(phis_deg.size());
  for (double phi : phis_deg) out.push_back(radiated_power(band_cov, phi, power_scale));
  return out;
}

}  // namespace qmimo
