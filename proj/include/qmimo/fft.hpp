// SPDX-License-Identifier: Apache-2.0
//
// Thin wrapper over FFTW for batched in-place complex transforms. Plans are
// cached per (length, batch, direction) and may be executed concurrently.

#ifndef QMIMO_FFT_HPP
#define QMIMO_FFT_HPP

#include <span>

#include "qmimo/common.hpp"

namespace qmimo::fft {

enum class Direction { forward, backward };

// Unnormalized in-place DFT of data.size()/n contiguous sequences of length n.
// forward uses e^{-j2pi kn/N}, backward e^{+j2pi kn/N}.
void transform(std::span<cplx> data, std::size_t n, Direction dir);

// Unitary DFT / inverse DFT along each row of a signal block.
void unitary_rows(SignalMatrix& rows, Direction dir);

}  // namespace qmimo::fft

#endif  // QMIMO_FFT_HPP
