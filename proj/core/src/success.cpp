#include "proxbench/success.hpp"

#include <cmath>
#include <limits>

#include "proxbench/error.hpp"
#include "proxbench/fft.hpp"
#include "proxbench/metrics.hpp"

namespace proxbench {
namespace {

std::size_t wrap(std::int64_t index, std::size_t extent) {
  const auto e = static_cast<std::int64_t>(extent);
  return static_cast<std::size_t>(((index % e) + e) % e);
}

void require_grid(const Signal& z) {
  if (z.shape().rank() != 2 || z.block_dim() != 2) throw ShapeError("grid alignment needs a complex 2-D image");
}

// conj(z[-i]) per axis.
Signal twin(const Signal& z) {
  const std::size_t rows = z.shape()[0];
  const std::size_t cols = z.shape()[1];
  Signal out(z.shape(), 2);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t src = wrap(-static_cast<std::int64_t>(r), rows) * cols + wrap(-static_cast<std::int64_t>(c), cols);
      out(r * cols + c, 0) = z(src, 0);
      out(r * cols + c, 1) = -z(src, 1);
    }
  }
  return out;
}

double block_modulus(const Signal& z, std::size_t i) {
  double sq = 0.0;
  for (double v : z.block(i)) sq += v * v;
  return std::sqrt(sq);
}

bool is_phase_family(Family family) {
  return family == Family::kCdp1D || family == Family::kCdp2D || family == Family::kFile;
}

}  // namespace

SuccessCriteria default_success_criteria(const Instance& instance) {
  switch (instance.meta.family) {
    case Family::kCdp1D: return {1e-9, false};
    case Family::kCdp2D: return {1e-7, false};
    case Family::kSparseDots: return {5e-4, false};
    case Family::kSrcLoc: return {instance.meta.noise ? 3.0 : 0.1, false};
    case Family::kFile: return {instance.meta.noise ? 0.35 : 1e-2, false};
    case Family::kToy: return {1e-2, false};
  }
  return {};
}

Signal apply_alignment(const Signal& z, const GridAlignment& alignment) {
  require_grid(z);
  const Signal src = alignment.reflect ? twin(z) : z;
  const std::size_t rows = z.shape()[0];
  const std::size_t cols = z.shape()[1];
  Signal out(z.shape(), 2);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t sr = wrap(static_cast<std::int64_t>(r) - alignment.shift_row, rows);
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t sc = wrap(static_cast<std::int64_t>(c) - alignment.shift_col, cols);
      out(r * cols + c, 0) = src(sr * cols + sc, 0);
      out(r * cols + c, 1) = src(sr * cols + sc, 1);
    }
  }
  return out;
}

GridAlignment best_alignment(const Signal& z, const Signal& ref) {
  require_grid(z);
  if (!z.same_layout(ref)) throw ShapeError("alignment needs matching layouts");
  const auto& dims = z.shape().dims();
  const std::size_t cols = dims[1];

  Signal ref_hat = ref;
  unitary_dft(ref_hat.values(), dims, FftDirection::kForward);

  GridAlignment best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (bool reflect : {false, true}) {
    Signal a = reflect ? twin(z) : z;
    unitary_dft(a.values(), dims, FftDirection::kForward);
    // corr[s] ~ sum_k conj(R_k) A_k e^{-2 pi i k s / N}
    for (std::size_t i = 0; i < a.num_blocks(); ++i) {
      const double ar = a(i, 0), ai = a(i, 1);
      const double rr = ref_hat(i, 0), ri = -ref_hat(i, 1);
      a(i, 0) = ar * rr - ai * ri;
      a(i, 1) = ar * ri + ai * rr;
    }
    unitary_dft(a.values(), dims, FftDirection::kForward);
    for (std::size_t i = 0; i < a.num_blocks(); ++i) {
      if (a(i, 0) > best_score) {
        best_score = a(i, 0);
        best = {reflect, static_cast<std::int64_t>(i / cols), static_cast<std::int64_t>(i % cols)};
      }
    }
  }
  return best;
}

double truth_distance(const Instance& instance, const Signal& z) {
  if (!instance.truth) throw ShapeError("instance has no truth");
  const Signal& truth = *instance.truth;
  if (!z.same_layout(truth)) throw ShapeError("estimate layout does not match the truth");
  if (instance.meta.family == Family::kSparseDots) {
    const Signal aligned = apply_alignment(z, best_alignment(z, truth));
    return iterate_change(aligned, truth) / norm(truth);
  }
  if (is_phase_family(instance.meta.family) && z.block_dim() == 2) return phase_aligned_distance(z, truth);
  return iterate_change(z, truth);
}

bool success(const Instance& instance, const Signal& z, const SuccessCriteria& criteria) {
  if (!instance.truth) throw ShapeError("instance has no truth");
  if (!z.all_finite()) return false;
  if (instance.meta.family != Family::kSparseDots) return truth_distance(instance, z) <= criteria.threshold;

  const Signal& truth = *instance.truth;
  const Signal aligned = apply_alignment(z, best_alignment(z, truth));
  double peak = 0.0;
  for (std::size_t i = 0; i < truth.num_blocks(); ++i) peak = std::max(peak, block_modulus(truth, i));
  const double band = criteria.threshold * peak;
  // Support match; pixels whose moduli agree to within the band may sit on
  // either side of the cutoff.
  for (std::size_t i = 0; i < truth.num_blocks(); ++i) {
    const double a = block_modulus(aligned, i);
    const double t = block_modulus(truth, i);
    if ((a > band) != (t > band) && std::abs(a - t) > band) return false;
  }
  if (criteria.support_only) return true;
  return iterate_change(aligned, truth) / norm(truth) <= criteria.threshold;
}

}  // namespace proxbench
