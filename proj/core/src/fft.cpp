#include "proxbench/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <functional>
#include <tuple>
#include <vector>

#include "proxbench/error.hpp"

namespace proxbench {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const std::vector<int>& dims, int sign, bool aligned) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(dims, sign, aligned);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const std::size_t total =
        std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    // FFTW_ESTIMATE keeps plans (and hence rounding) independent of timing.
    const unsigned flags = aligned ? FFTW_ESTIMATE : FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan =
        fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), scratch, scratch, sign, flags);
    fftw_free(scratch);
    if (plan == nullptr) throw NumericError("FFTW failed to create a plan");
    plans_.emplace(std::move(key), plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::vector<int>, int, bool>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void unitary_dft(std::span<double> interleaved, std::span<const std::size_t> dims,
                 FftDirection direction) {
  if (dims.empty() || dims.size() > 2) throw ShapeError("DFT needs one or two extents");
  std::vector<int> extents(dims.begin(), dims.end());
  const std::size_t total =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (interleaved.size() != 2 * total) throw ShapeError("DFT buffer does not match extents");

  const int sign = direction == FftDirection::kForward ? FFTW_FORWARD : FFTW_BACKWARD;
  auto* data = reinterpret_cast<fftw_complex*>(interleaved.data());
  const bool aligned = fftw_alignment_of(interleaved.data()) == 0;
  fftw_plan plan = plan_cache().get(extents, sign, aligned);
  fftw_execute_dft(plan, data, data);

  const double scale = 1.0 / std::sqrt(static_cast<double>(total));
  for (double& v : interleaved) v *= scale;
}

}  // namespace proxbench
