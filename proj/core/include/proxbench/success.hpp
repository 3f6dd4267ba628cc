#pragma once

#include <cstdint>

#include "proxbench/instances.hpp"
#include "proxbench/signal.hpp"

namespace proxbench {

struct SuccessCriteria {
  double threshold = 1e-2;
  // Sparse dots only: skip the amplitude comparison and match supports alone.
  bool support_only = false;

  friend bool operator==(const SuccessCriteria&, const SuccessCriteria&) = default;
};

/// Family defaults: 1e-9 (1-D CDP), 1e-7 (2-D CDP), 5e-4 (sparse dots),
/// 0.1 / 3 (source localization, noiseless / noisy), 1e-2 / 0.35 (dataset
/// files, noiseless / noisy), 1e-2 for toys.
SuccessCriteria default_success_criteria(const Instance& instance);

/// Alignment of a grid image: optional point reflection i -> -i followed by a
/// cyclic shift, (T z)[i] = z'[i - shift].
struct GridAlignment {
  bool reflect = false;
  std::int64_t shift_row = 0;
  std::int64_t shift_col = 0;
  friend bool operator==(const GridAlignment&, const GridAlignment&) = default;
};

Signal apply_alignment(const Signal& z, const GridAlignment& alignment);
/// Alignment maximizing Re <T z, ref> over all cyclic shifts and both
/// reflections (FFT cross-correlation). Requires rank-2 shapes.
GridAlignment best_alignment(const Signal& z, const Signal& ref);

/// Family-specific distance to the truth: phase-aligned distance (phase
/// families), best-aligned relative error (sparse dots), Euclidean otherwise.
/// Throws ShapeError when the instance has no truth.
double truth_distance(const Instance& instance, const Signal& z);

bool success(const Instance& instance, const Signal& z, const SuccessCriteria& criteria);

}  // namespace proxbench
