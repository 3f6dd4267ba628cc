#include "proxbench/measurement_map.hpp"

#include <array>
#include <cmath>
#include <string>

#include "proxbench/error.hpp"
#include "proxbench/fft.hpp"

namespace proxbench {
namespace {

constexpr double kUnitModulusTolerance = 1e-12;

std::size_t wrap(std::int64_t index, std::size_t extent) {
  const auto e = static_cast<std::int64_t>(extent);
  return static_cast<std::size_t>(((index % e) + e) % e);
}

// out[i] = in[i - offset] (cyclic), per axis.
Signal shift_cyclic(const Signal& in, const std::vector<std::int64_t>& offsets, int sign) {
  Signal out(in.shape(), in.block_dim());
  const auto& dims = in.shape().dims();
  const std::size_t d = in.block_dim();
  if (dims.empty()) return in;
  if (dims.size() == 1) {
    const std::size_t n = dims[0];
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t src = wrap(static_cast<std::int64_t>(i) - sign * offsets[0], n);
      for (std::size_t c = 0; c < d; ++c) out(i, c) = in(src, c);
    }
    return out;
  }
  const std::size_t rows = dims[0];
  const std::size_t cols = dims[1];
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t sr = wrap(static_cast<std::int64_t>(r) - sign * offsets[0], rows);
    for (std::size_t col = 0; col < cols; ++col) {
      const std::size_t sc = wrap(static_cast<std::int64_t>(col) - sign * offsets[1], cols);
      for (std::size_t c = 0; c < d; ++c) out(r * cols + col, c) = in(sr * cols + sc, c);
    }
  }
  return out;
}

void multiply_mask(Signal& z, const Signal& mask, bool conjugate) {
  const double s = conjugate ? -1.0 : 1.0;
  for (std::size_t i = 0; i < z.num_blocks(); ++i) {
    const double re = z(i, 0);
    const double im = z(i, 1);
    const double mr = mask(i, 0);
    const double mi = s * mask(i, 1);
    z(i, 0) = re * mr - im * mi;
    z(i, 1) = re * mi + im * mr;
  }
}

void run_transform(Transform transform, Signal& z, FftDirection direction) {
  if (transform == Transform::kIdentity) return;
  const std::array<std::size_t, 1> flat{z.num_blocks()};
  const auto& dims = z.shape().dims();
  unitary_dft(z.values(),
              transform == Transform::kDft2D ? std::span<const std::size_t>(dims)
                                             : std::span<const std::size_t>(flat),
              direction);
}

}  // namespace

MeasurementMap::MeasurementMap(Transform transform, Modifier modifier)
    : transform_(transform), modifier_(std::move(modifier)) {
  if (const auto* m = std::get_if<PointwiseMask>(&modifier_)) {
    if (m->mask.block_dim() != 2) throw ShapeError("mask must have block dimension 2");
    for (std::size_t i = 0; i < m->mask.num_blocks(); ++i) {
      const double mod = std::hypot(m->mask(i, 0), m->mask(i, 1));
      if (std::abs(mod - 1.0) > kUnitModulusTolerance) {
        throw ShapeError("mask entry " + std::to_string(i) + " is not unit modulus");
      }
    }
  } else if (const auto* t = std::get_if<Translate>(&modifier_)) {
    if (t->offset.empty()) throw ShapeError("translation offset is empty");
    for (double v : t->offset) {
      if (!std::isfinite(v)) throw NumericError("translation offset is not finite");
    }
  }
}

void MeasurementMap::check_layout(const Signal& z) const {
  switch (transform_) {
    case Transform::kIdentity:
      break;
    case Transform::kDft1D:
      if (z.block_dim() != 2) throw ShapeError("DFT requires block dimension 2");
      if (z.shape().rank() > 1) throw ShapeError("1-D DFT requires a 1-D signal");
      break;
    case Transform::kDft2D:
      if (z.block_dim() != 2) throw ShapeError("DFT requires block dimension 2");
      if (z.shape().rank() != 2) throw ShapeError("2-D DFT requires a 2-D signal");
      break;
  }
  std::visit(
      [&](const auto& mod) {
        using T = std::decay_t<decltype(mod)>;
        if constexpr (std::is_same_v<T, PointwiseMask>) {
          if (!mod.mask.same_layout(z)) throw ShapeError("mask layout does not match signal");
        } else if constexpr (std::is_same_v<T, CyclicShift>) {
          if (mod.offsets.size() != z.shape().rank()) {
            throw ShapeError("cyclic shift needs one offset per axis");
          }
        } else if constexpr (std::is_same_v<T, Translate>) {
          if (mod.offset.size() != z.block_dim()) {
            throw ShapeError("translation offset length must equal the block dimension");
          }
        }
      },
      modifier_);
}

void MeasurementMap::apply_modifier(Signal& z) const {
  std::visit(
      [&](const auto& mod) {
        using T = std::decay_t<decltype(mod)>;
        if constexpr (std::is_same_v<T, PointwiseMask>) {
          multiply_mask(z, mod.mask, false);
        } else if constexpr (std::is_same_v<T, CyclicShift>) {
          z = shift_cyclic(z, mod.offsets, +1);
        } else if constexpr (std::is_same_v<T, Translate>) {
          for (std::size_t i = 0; i < z.num_blocks(); ++i) {
            for (std::size_t c = 0; c < z.block_dim(); ++c) z(i, c) -= mod.offset[c];
          }
        }
      },
      modifier_);
}

void MeasurementMap::apply_modifier_adjoint(Signal& z) const {
  std::visit(
      [&](const auto& mod) {
        using T = std::decay_t<decltype(mod)>;
        if constexpr (std::is_same_v<T, PointwiseMask>) {
          multiply_mask(z, mod.mask, true);
        } else if constexpr (std::is_same_v<T, CyclicShift>) {
          z = shift_cyclic(z, mod.offsets, -1);
        } else if constexpr (std::is_same_v<T, Translate>) {
          for (std::size_t i = 0; i < z.num_blocks(); ++i) {
            for (std::size_t c = 0; c < z.block_dim(); ++c) z(i, c) += mod.offset[c];
          }
        }
      },
      modifier_);
}

Signal MeasurementMap::apply(const Signal& z) const {
  check_layout(z);
  Signal out = z;
  apply_modifier(out);
  run_transform(transform_, out, FftDirection::kForward);
  return out;
}

Signal MeasurementMap::adjoint(const Signal& y) const {
  check_layout(y);
  Signal out = y;
  run_transform(transform_, out, FftDirection::kInverse);
  apply_modifier_adjoint(out);
  return out;
}

Signal MeasurementMap::adjoint_linear(const Signal& y) const {
  if (is_linear()) return adjoint(y);
  check_layout(y);
  Signal out = y;
  run_transform(transform_, out, FftDirection::kInverse);
  return out;
}

Signal apply_map(const MeasurementMap& map, const Signal& z) { return map.apply(z); }
Signal apply_adjoint(const MeasurementMap& map, const Signal& y) { return map.adjoint(y); }

std::string_view to_string(Transform transform) noexcept {
  switch (transform) {
    case Transform::kIdentity:
      return "identity";
    case Transform::kDft1D:
      return "dft1d";
    case Transform::kDft2D:
      return "dft2d";
  }
  return "unknown";
}

}  // namespace proxbench
