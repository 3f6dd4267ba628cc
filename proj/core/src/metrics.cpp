#include "proxbench/metrics.hpp"

#include <cmath>

#include "proxbench/error.hpp"

namespace proxbench {

Signal phase_align(const Signal& z, const Signal& zref) {
  if (z.block_dim() != 2 || zref.block_dim() != 2) {
    throw ShapeError("phase alignment requires block dimension 2");
  }
  if (!z.same_layout(zref)) throw ShapeError("signal layouts differ");

  // c = sum_i conj(z_i) * zref_i; the optimal rotation is arg(c).
  double c_re = 0.0;
  double c_im = 0.0;
  for (std::size_t i = 0; i < z.num_blocks(); ++i) {
    const double a = z(i, 0);
    const double b = z(i, 1);
    const double x = zref(i, 0);
    const double y = zref(i, 1);
    c_re += a * x + b * y;
    c_im += a * y - b * x;
  }
  const double mag = std::hypot(c_re, c_im);
  const double cos_t = mag > 0.0 ? c_re / mag : 1.0;
  const double sin_t = mag > 0.0 ? c_im / mag : 0.0;

  Signal rotated = z;
  for (std::size_t i = 0; i < z.num_blocks(); ++i) {
    const double a = z(i, 0);
    const double b = z(i, 1);
    rotated(i, 0) = cos_t * a - sin_t * b;
    rotated(i, 1) = sin_t * a + cos_t * b;
  }
  return rotated;
}

double phase_aligned_distance(const Signal& z, const Signal& zref) {
  // Rotating and measuring directly avoids the cancellation in the closed form
  // sqrt(|z|^2 + |zref|^2 - 2|c|) near zero.
  return norm(phase_align(z, zref) - zref);
}

double iterate_change(const Signal& z_prev, const Signal& z_next) {
  if (!z_prev.same_layout(z_next)) throw ShapeError("signal layouts differ");
  const auto a = z_prev.values();
  const auto b = z_next.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = b[k] - a[k];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double iterate_change(const ProductSignal& z_prev, const ProductSignal& z_next) {
  if (!z_prev.same_layout(z_next)) throw ShapeError("product signal layouts differ");
  double sum = 0.0;
  for (std::size_t j = 0; j < z_prev.num_factors(); ++j) {
    const double c = iterate_change(z_prev[j], z_next[j]);
    sum += c * c;
  }
  return std::sqrt(sum);
}

}  // namespace proxbench
