// SPDX-License-Identifier: Apache-2.0

#include "qmimo/precoder.hpp"

#include <cmath>
#include <string>

#include "qmimo/fft.hpp"

namespace qmimo {

PrecoderSet zf_precoder(std::span<const CMat> freq, const SystemGrid& grid) {
  if (static_cast<int>(freq.size()) != grid.N) {
    throw std::invalid_argument("zf_precoder: expected one channel matrix per subcarrier");
  }
  PrecoderSet set;
  set.matrices.assign(grid.N, CMat::Zero(grid.B, grid.U));

  double trace_sum = 0.0;
  for (int k : grid.occupied) {
    const CMat& h = freq[k];
    if (h.rows() != grid.U || h.cols() != grid.B) {
      throw std::invalid_argument("zf_precoder: channel matrix has wrong shape");
    }
    const CMat gram = h * h.adjoint();
    Eigen::SelfAdjointEigenSolver<CMat> eig(gram, Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    if (!(lmin > 0.0) || lmax / lmin > 1e12) {
      throw std::domain_error("zf_precoder: channel at subcarrier " + std::to_string(k) +
                              " is rank deficient");
    }
    const CMat inv = gram.llt().solve(CMat::Identity(grid.U, grid.U));
    trace_sum += inv.trace().real();
    set.matrices[k] = h.adjoint() * inv;
  }
  set.norm_const = 1.0 / std::sqrt(trace_sum / grid.S);
  for (int k : grid.occupied) set.matrices[k] *= set.norm_const;
  return set;
}

SymbolFrame draw_symbols(const SystemGrid& grid, Constellation constellation, RandomStream& rng) {
  SymbolFrame frame;
  frame.constellation = constellation;
  frame.symbols = CMat::Zero(grid.U, grid.N);
  const double a = 1.0 / std::sqrt(2.0);
  for (int k : grid.occupied) {
    for (int u = 0; u < grid.U; ++u) {
      if (constellation == Constellation::qpsk) {
        const std::uint64_t bits = rng.next_u64();
        frame.symbols(u, k) = cplx((bits & 1U) ? -a : a, (bits & 2U) ? -a : a);
      } else {
        frame.symbols(u, k) = rng.complex_normal();
      }
    }
  }
  return frame;
}

SignalMatrix form_dac_input(const SymbolFrame& frame, const PrecoderSet& precoder,
                            std::span<const cplx> dpd, double xi) {
  const auto N = static_cast<Eigen::Index>(precoder.matrices.size());
  if (frame.symbols.cols() != N || static_cast<Eigen::Index>(dpd.size()) != N) {
    throw std::invalid_argument("form_dac_input: dimension mismatch");
  }
  const Eigen::Index B = precoder.matrices.front().rows();
  if (precoder.matrices.front().cols() != frame.symbols.rows()) {
    throw std::invalid_argument("form_dac_input: precoder and symbol dimensions differ");
  }
  SignalMatrix z = SignalMatrix::Zero(B, N);
  for (Eigen::Index k = 0; k < N; ++k) {
    if (dpd[k] == cplx(0.0)) continue;
    z.col(k) = (xi * dpd[k]) * (precoder.matrices[k] * frame.symbols.col(k));
  }
  fft::unitary_rows(z, fft::Direction::backward);
  return z;
}

CMat dac_input_covariance(const PrecoderSet& precoder, std::span<const cplx> dpd, double xi) {
  const auto N = precoder.matrices.size();
  const Eigen::Index B = precoder.matrices.front().rows();
  CMat c = CMat::Zero(B, B);
  for (std::size_t k = 0; k < N; ++k) {
    if (dpd[k] == cplx(0.0)) continue;
    c.noalias() += std::norm(dpd[k]) * precoder.matrices[k] * precoder.matrices[k].adjoint();
  }
  return c * (xi * xi / static_cast<double>(N));
}

}  // namespace qmimo
