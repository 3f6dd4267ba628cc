#pragma once

#include "proxbench/signal.hpp"

namespace proxbench {

/// min over theta of || e^{i theta} z - zref ||, the distance modulo a global
/// phase. Requires d = 2 and matching layouts.
double phase_aligned_distance(const Signal& z, const Signal& zref);

/// The rotation e^{i theta} attaining phase_aligned_distance, applied to z.
Signal phase_align(const Signal& z, const Signal& zref);

/// Euclidean norm of z_next - z_prev.
double iterate_change(const Signal& z_prev, const Signal& z_next);
double iterate_change(const ProductSignal& z_prev, const ProductSignal& z_next);

}  // namespace proxbench
