#pragma once

#include <cstddef>
#include <vector>

#include "proxbench/constraint_set.hpp"
#include "proxbench/signal.hpp"

namespace proxbench {

/// C = C_0 x C_1 x ... x C_m acting factorwise on product signals.
class ProductSet {
 public:
  explicit ProductSet(std::vector<ConstraintSet> factors);

  std::size_t num_factors() const noexcept { return factors_.size(); }
  const std::vector<ConstraintSet>& factors() const noexcept { return factors_; }

  ProductSignal project(const ProductSignal& z) const;

 private:
  std::vector<ConstraintSet> factors_;
};

ProductSignal project(const ProductSet& set, const ProductSignal& z);
ProductSignal reflect(const ProductSet& set, const ProductSignal& z);

/// A feasibility problem: find z in C_0 n C_1 n ... n C_m.
///
/// When `has_qualitative` is true, sets()[0] is the qualitative constraint C_0
/// and the remaining sets are data constraints; otherwise every set is a data
/// constraint and C_0 is the whole space (coded diffraction, source
/// localization).
class Problem {
 public:
  /// Throws ShapeError for fewer than two sets, Diagonal members, or a
  /// qualitative flag with a single set.
  Problem(Shape shape, std::size_t block_dim, std::vector<ConstraintSet> sets, bool has_qualitative);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t block_dim() const noexcept { return block_dim_; }
  std::size_t num_blocks() const noexcept { return shape_.num_blocks(); }

  /// Ordered list C_0 ... C_m as used by the cyclic and averaged algorithms.
  const std::vector<ConstraintSet>& sets() const noexcept { return sets_; }
  std::size_t num_sets() const noexcept { return sets_.size(); }
  bool has_qualitative() const noexcept { return has_qualitative_; }
  /// Index of the first data set (1 with a qualitative set, else 0).
  std::size_t first_data_index() const noexcept { return has_qualitative_ ? 1 : 0; }
  std::size_t num_data_sets() const noexcept { return sets_.size() - first_data_index(); }

  ProductSet product_set() const { return ProductSet(sets_); }
  ConstraintSet diagonal() const { return ConstraintSet::diagonal(sets_.size()); }

  /// A zero signal of the problem's layout.
  Signal zero_signal() const { return Signal(shape_, block_dim_); }
  void check(const Signal& z) const;

  friend bool operator==(const Problem&, const Problem&) = default;

 private:
  Shape shape_;
  std::size_t block_dim_;
  std::vector<ConstraintSet> sets_;
  bool has_qualitative_;
};

/// Sum of distances from z to every set (the feasibility gap).
double feasibility_gap(const Problem& problem, const Signal& z);

}  // namespace proxbench
