#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <variant>
#include <vector>

#include "proxbench/measurement_map.hpp"
#include "proxbench/signal.hpp"

namespace proxbench {

class ConstraintSet;

/// { z : || (F P_j z)_i || = b_i for every block i }
struct Amplitude {
  MeasurementMap map;
  std::vector<double> radii;
};

enum class SupportMode : std::uint8_t {
  kRealNonnegative = 0,  // first coordinate >= 0, remaining coordinates zero
  kReal = 1,             // remaining coordinates zero
  kSupportOnly = 2,      // no constraint inside the support
};

/// Blocks outside `support` are zero; inside, the block obeys `mode`.
/// An empty support mask means "every block".
struct NonnegRealSupport {
  std::vector<std::uint8_t> support;
  SupportMode mode = SupportMode::kRealNonnegative;
};

/// At most `s` nonzero blocks.
struct Sparsity {
  std::size_t s = 1;
};

/// NonnegRealSupport (real nonnegative) intersected with Sparsity.
struct SparseNonnegCone {
  std::size_t s = 1;
  std::vector<std::uint8_t> support;
};

/// { (z, z, ..., z) } in the product space with `factors` copies.
struct Diagonal {
  std::size_t factors = 2;
};

/// { z : map(z) in inner } for an isometric map; projects as
/// map^* . P_inner . map. Used for lines, affine lines and rotated cones.
struct Preimage {
  MeasurementMap map;
  std::shared_ptr<const ConstraintSet> inner;
};

enum class SetKind { kAmplitude, kNonnegRealSupport, kSparsity, kSparseNonnegCone, kDiagonal, kPreimage };

/// One constraint set with its projector, reflector and distance. Immutable.
class ConstraintSet {
 public:
  using Variant =
      std::variant<Amplitude, NonnegRealSupport, Sparsity, SparseNonnegCone, Diagonal, Preimage>;

  /// Validates the invariants of each variant (radii >= 0, s >= 1, factors >= 2).
  explicit ConstraintSet(Variant v);

  static ConstraintSet amplitude(MeasurementMap map, std::vector<double> radii);
  static ConstraintSet nonneg_real_support(std::vector<std::uint8_t> support,
                                           SupportMode mode = SupportMode::kRealNonnegative);
  static ConstraintSet sparsity(std::size_t s);
  static ConstraintSet sparse_nonneg_cone(std::size_t s, std::vector<std::uint8_t> support = {});
  static ConstraintSet diagonal(std::size_t factors);
  static ConstraintSet preimage(MeasurementMap map, ConstraintSet inner);

  SetKind kind() const noexcept { return static_cast<SetKind>(variant_.index()); }
  const Variant& variant() const noexcept { return variant_; }
  bool applies_to_product() const noexcept { return kind() == SetKind::kDiagonal; }

  Signal project(const Signal& z) const;
  ProductSignal project(const ProductSignal& z) const;

  friend bool operator==(const ConstraintSet& a, const ConstraintSet& b);

 private:
  Variant variant_;
};

Signal project(const ConstraintSet& set, const Signal& z);
ProductSignal project(const ConstraintSet& set, const ProductSignal& z);
/// 2 P_C(z) - z
Signal reflect(const ConstraintSet& set, const Signal& z);
ProductSignal reflect(const ConstraintSet& set, const ProductSignal& z);
/// || z - P_C(z) ||. Amplitude uses the closed form
/// sqrt(sum_i (|| (F P_j z)_i || - b_i)^2), valid because the maps are isometries.
double set_distance(const ConstraintSet& set, const Signal& z);
double set_distance(const ConstraintSet& set, const ProductSignal& z);

std::string_view to_string(SetKind kind) noexcept;

}  // namespace proxbench
