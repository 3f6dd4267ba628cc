#pragma once

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "proxbench/signal.hpp"

namespace proxbench {

/// The transform F applied after the per-measurement modifier.
enum class Transform : std::uint8_t { kIdentity = 0, kDft1D = 1, kDft2D = 2 };

struct NoModifier {
  friend bool operator==(const NoModifier&, const NoModifier&) = default;
};

/// Pointwise complex multiplication by a unit-modulus mask (d = 2).
struct PointwiseMask {
  Signal mask;
  friend bool operator==(const PointwiseMask&, const PointwiseMask&) = default;
};

/// Cyclic shift of the grid: (P z)[i] = z[i - offset] along each axis.
struct CyclicShift {
  std::vector<std::int64_t> offsets;
  friend bool operator==(const CyclicShift&, const CyclicShift&) = default;
};

/// Affine shift z -> z - a applied to every block.
struct Translate {
  std::vector<double> offset;
  friend bool operator==(const Translate&, const Translate&) = default;
};

using Modifier = std::variant<NoModifier, PointwiseMask, CyclicShift, Translate>;

/// The composed map F . P_j of one measurement. Every variant is an isometry
/// (unitary or a pure translation), so its adjoint is its inverse.
class MeasurementMap {
 public:
  MeasurementMap() = default;
  /// Throws ShapeError for masks that are not d = 2 or not unit modulus
  /// (1 +- 1e-12), and for empty translation offsets.
  MeasurementMap(Transform transform, Modifier modifier);

  static MeasurementMap identity() { return {}; }

  Transform transform() const noexcept { return transform_; }
  const Modifier& modifier() const noexcept { return modifier_; }
  bool is_linear() const noexcept { return !std::holds_alternative<Translate>(modifier_); }

  /// F . P_j (z)
  Signal apply(const Signal& z) const;
  /// P_j^* . F^* (y); for Translate the inverse shift y -> y + a.
  Signal adjoint(const Signal& y) const;
  /// Adjoint of the linear part only (Translate contributes the identity).
  /// This is the map used by chain-rule gradients.
  Signal adjoint_linear(const Signal& y) const;

  friend bool operator==(const MeasurementMap&, const MeasurementMap&) = default;

 private:
  void apply_modifier(Signal& z) const;
  void apply_modifier_adjoint(Signal& z) const;
  void check_layout(const Signal& z) const;

  Transform transform_ = Transform::kIdentity;
  Modifier modifier_ = NoModifier{};
};

Signal apply_map(const MeasurementMap& map, const Signal& z);
Signal apply_adjoint(const MeasurementMap& map, const Signal& y);

std::string_view to_string(Transform transform) noexcept;

}  // namespace proxbench
