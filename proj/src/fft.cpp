// SPDX-License-Identifier: Apache-2.0

#include "qmimo/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace qmimo::fft {
namespace {

using PlanKey = std::tuple<std::size_t, std::size_t, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, std::size_t howmany, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    const PlanKey key{n, howmany, sign};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // FFTW_ESTIMATE never touches the planning buffer contents.
    std::vector<cplx> scratch(n * howmany);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int len = static_cast<int>(n);
    fftw_plan plan = fftw_plan_many_dft(1, &len, static_cast<int>(howmany), buf, nullptr, 1,
                                        len, buf, nullptr, 1, len, sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("fftw: failed to create plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform(std::span<cplx> data, std::size_t n, Direction dir) {
  if (n == 0 || data.size() % n != 0) {
    throw std::invalid_argument("fft: buffer length is not a multiple of the transform length");
  }
  if (data.empty()) return;
  const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan = cache().get(n, data.size() / n, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

void unitary_rows(SignalMatrix& rows, Direction dir) {
  const auto n = static_cast<std::size_t>(rows.cols());
  transform(std::span<cplx>(rows.data(), static_cast<std::size_t>(rows.size())), n, dir);
  rows *= 1.0 / std::sqrt(static_cast<double>(n));
}

}  // namespace qmimo::fft
