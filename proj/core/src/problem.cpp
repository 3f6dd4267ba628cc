#include "proxbench/problem.hpp"

#include "proxbench/error.hpp"

namespace proxbench {

ProductSet::ProductSet(std::vector<ConstraintSet> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw ShapeError("product set needs at least one factor");
}

ProductSignal ProductSet::project(const ProductSignal& z) const {
  if (z.num_factors() != factors_.size()) throw ShapeError("product set factor count mismatch");
  std::vector<Signal> out;
  out.reserve(factors_.size());
  for (std::size_t j = 0; j < factors_.size(); ++j) out.push_back(factors_[j].project(z[j]));
  return ProductSignal(std::move(out));
}

ProductSignal project(const ProductSet& set, const ProductSignal& z) { return set.project(z); }

ProductSignal reflect(const ProductSet& set, const ProductSignal& z) {
  ProductSignal r = set.project(z);
  r *= 2.0;
  r -= z;
  return r;
}

Problem::Problem(Shape shape, std::size_t block_dim, std::vector<ConstraintSet> sets, bool has_qualitative)
    : shape_(std::move(shape)),
      block_dim_(block_dim),
      sets_(std::move(sets)),
      has_qualitative_(has_qualitative) {
  if (sets_.size() < 2) throw ShapeError("a problem needs at least two constraint sets");
  for (const auto& s : sets_) {
    if (s.applies_to_product()) throw ShapeError("problem sets must act on single signals");
  }
  if (block_dim_ < 1 || block_dim_ > 3) throw ShapeError("block dimension must be 1, 2 or 3");
}

void Problem::check(const Signal& z) const {
  if (z.shape() != shape_ || z.block_dim() != block_dim_) {
    throw ShapeError("signal layout does not match the problem");
  }
}

double feasibility_gap(const Problem& problem, const Signal& z) {
  double gap = 0.0;
  for (const auto& set : problem.sets()) gap += set_distance(set, z);
  return gap;
}

}  // namespace proxbench
