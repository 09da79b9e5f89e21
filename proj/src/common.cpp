// SPDX-License-Identifier: Apache-2.0

#include "qmimo/common.hpp"

#include <cmath>

namespace qmimo {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double to_db(double linear) { return 10.0 * std::log10(linear); }

double from_db(double decibel) { return std::pow(10.0, decibel / 10.0); }

}  // namespace qmimo
