// SPDX-License-Identifier: Apache-2.0
//
// Per-subcarrier zero-forcing precoding, symbol generation and assembly of
// the predistorted time-domain DAC input.

#ifndef QMIMO_PRECODER_HPP
#define QMIMO_PRECODER_HPP

#include <span>
#include <vector>

#include "qmimo/common.hpp"
#include "qmimo/rng.hpp"
#include "qmimo/sysgrid.hpp"

namespace qmimo {

// P_k = c H_k^H (H_k H_k^H)^-1 on the occupied set, zero on guard bins, with
// c = 1 / sqrt((1/S) sum_k tr((H_k H_k^H)^-1)) so that the mean per-subcarrier
// precoder energy is 1.
struct PrecoderSet {
  std::vector<CMat> matrices;  // N entries, B x U
  double norm_const = 0.0;
};

// Throws std::domain_error when some H_k H_k^H has condition number above 1e12.
PrecoderSet zf_precoder(std::span<const CMat> freq, const SystemGrid& grid);

enum class Constellation { qpsk, gaussian };

struct SymbolFrame {
  CMat symbols;  // U x N, column k is s_k; zero on guard bins
  Constellation constellation = Constellation::qpsk;
};

// QPSK points are (+-1 +- j) / sqrt(2); Gaussian symbols are CN(0, 1).
SymbolFrame draw_symbols(const SystemGrid& grid, Constellation constellation, RandomStream& rng);

// z_b = unitary IDFT over k of xi * dpd_k * (P_k s_k)_b, returned as B x N.
SignalMatrix form_dac_input(const SymbolFrame& frame, const PrecoderSet& precoder,
                            std::span<const cplx> dpd, double xi);

// Per-sample DAC input covariance C_{z_n} = (xi^2 / N) sum_k |dpd_k|^2 P_k P_k^H.
CMat dac_input_covariance(const PrecoderSet& precoder, std::span<const cplx> dpd, double xi);

}  // namespace qmimo

#endif  // QMIMO_PRECODER_HPP
