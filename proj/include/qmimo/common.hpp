// SPDX-License-Identifier: Apache-2.0
//
// Shared numeric types and small helpers used across the simulator.

#ifndef QMIMO_COMMON_HPP
#define QMIMO_COMMON_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace qmimo {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// B x T sample block, one antenna per row. Row-major so every antenna's
// sequence is contiguous and can be handed to the FFT directly.
using SignalMatrix =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kPi = 3.14159265358979323846;

// Raised for invalid parameters coming from configuration or callers.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Standard normal CDF.
double normal_cdf(double x);

double to_db(double linear);
double from_db(double decibel);

}  // namespace qmimo

#endif  // QMIMO_COMMON_HPP
