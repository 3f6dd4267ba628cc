#include "proxbench/constraint_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "proxbench/error.hpp"

namespace proxbench {
namespace {

void check_support(const std::vector<std::uint8_t>& support, const Signal& z) {
  if (!support.empty() && support.size() != z.num_blocks()) {
    throw ShapeError("support mask has " + std::to_string(support.size()) + " entries, signal has " +
                     std::to_string(z.num_blocks()) + " blocks");
  }
}

Signal project_support(const NonnegRealSupport& set, const Signal& z) {
  check_support(set.support, z);
  Signal out = z;
  const std::size_t d = z.block_dim();
  for (std::size_t i = 0; i < z.num_blocks(); ++i) {
    auto block = out.block(i);
    if (!set.support.empty() && set.support[i] == 0) {
      std::fill(block.begin(), block.end(), 0.0);
      continue;
    }
    if (set.mode == SupportMode::kSupportOnly) continue;
    for (std::size_t c = 1; c < d; ++c) block[c] = 0.0;
    if (set.mode == SupportMode::kRealNonnegative) block[0] = std::max(block[0], 0.0);
  }
  return out;
}

// Keeps the s blocks of largest norm; equal norms resolve to the lower index.
Signal project_sparsity(std::size_t s, const Signal& z) {
  const std::size_t n = z.num_blocks();
  if (s > n) throw ShapeError("sparsity level exceeds the number of blocks");
  if (s == n) return z;

  std::vector<std::pair<double, std::size_t>> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (double v : z.block(i)) sq += v * v;
    order[i] = {sq, i};
  }
  auto before = [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(s), order.end(), before);

  Signal out(z.shape(), z.block_dim());
  for (std::size_t k = 0; k < s; ++k) {
    const std::size_t i = order[k].second;
    std::copy(z.block(i).begin(), z.block(i).end(), out.block(i).begin());
  }
  return out;
}

Signal project_amplitude(const Amplitude& set, const Signal& z) {
  if (set.radii.size() != z.num_blocks()) {
    throw ShapeError("amplitude radii do not match the number of blocks");
  }
  Signal y = set.map.apply(z);
  for (std::size_t i = 0; i < y.num_blocks(); ++i) {
    auto block = y.block(i);
    double sq = 0.0;
    for (double v : block) sq += v * v;
    if (sq > 0.0) {
      const double scale = set.radii[i] / std::sqrt(sq);
      for (double& v : block) v *= scale;
    } else {
      // Any point of b_i * S is nearest; pick b_i * e_1.
      std::fill(block.begin(), block.end(), 0.0);
      block[0] = set.radii[i];
    }
  }
  return set.map.adjoint(y);
}

double amplitude_distance(const Amplitude& set, const Signal& z) {
  if (set.radii.size() != z.num_blocks()) {
    throw ShapeError("amplitude radii do not match the number of blocks");
  }
  const Signal y = set.map.apply(z);
  double sum = 0.0;
  for (std::size_t i = 0; i < y.num_blocks(); ++i) {
    double sq = 0.0;
    for (double v : y.block(i)) sq += v * v;
    const double diff = std::sqrt(sq) - set.radii[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

}  // namespace

ConstraintSet::ConstraintSet(Variant v) : variant_(std::move(v)) {
  std::visit(
      [](const auto& set) {
        using T = std::decay_t<decltype(set)>;
        if constexpr (std::is_same_v<T, Amplitude>) {
          for (double r : set.radii) {
            if (!(r >= 0.0) || !std::isfinite(r)) {
              throw ShapeError("amplitude radii must be finite and nonnegative");
            }
          }
        } else if constexpr (std::is_same_v<T, Sparsity> || std::is_same_v<T, SparseNonnegCone>) {
          if (set.s < 1) throw ShapeError("sparsity level must be at least 1");
        } else if constexpr (std::is_same_v<T, Diagonal>) {
          if (set.factors < 2) throw ShapeError("diagonal needs at least two factors");
        } else if constexpr (std::is_same_v<T, Preimage>) {
          if (!set.inner) throw ShapeError("preimage needs an inner set");
          if (set.inner->applies_to_product()) throw ShapeError("preimage of a product set");
        }
      },
      variant_);
}

ConstraintSet ConstraintSet::amplitude(MeasurementMap map, std::vector<double> radii) {
  return ConstraintSet(Amplitude{std::move(map), std::move(radii)});
}

ConstraintSet ConstraintSet::nonneg_real_support(std::vector<std::uint8_t> support, SupportMode mode) {
  return ConstraintSet(NonnegRealSupport{std::move(support), mode});
}

ConstraintSet ConstraintSet::sparsity(std::size_t s) { return ConstraintSet(Sparsity{s}); }

ConstraintSet ConstraintSet::sparse_nonneg_cone(std::size_t s, std::vector<std::uint8_t> support) {
  return ConstraintSet(SparseNonnegCone{s, std::move(support)});
}

ConstraintSet ConstraintSet::diagonal(std::size_t factors) { return ConstraintSet(Diagonal{factors}); }

ConstraintSet ConstraintSet::preimage(MeasurementMap map, ConstraintSet inner) {
  return ConstraintSet(Preimage{std::move(map), std::make_shared<const ConstraintSet>(std::move(inner))});
}

Signal ConstraintSet::project(const Signal& z) const {
  return std::visit(
      [&](const auto& set) -> Signal {
        using T = std::decay_t<decltype(set)>;
        if constexpr (std::is_same_v<T, Amplitude>) {
          return project_amplitude(set, z);
        } else if constexpr (std::is_same_v<T, NonnegRealSupport>) {
          return project_support(set, z);
        } else if constexpr (std::is_same_v<T, Sparsity>) {
          return project_sparsity(set.s, z);
        } else if constexpr (std::is_same_v<T, SparseNonnegCone>) {
          // P_{S_s} P_{C+} = P_{S_s n C+}
          return project_sparsity(set.s, project_support({set.support, SupportMode::kRealNonnegative}, z));
        } else if constexpr (std::is_same_v<T, Diagonal>) {
          throw ShapeError("the diagonal set applies to product signals only");
        } else {
          return set.map.adjoint(set.inner->project(set.map.apply(z)));
        }
      },
      variant_);
}

ProductSignal ConstraintSet::project(const ProductSignal& z) const {
  const auto* diag = std::get_if<Diagonal>(&variant_);
  if (diag == nullptr) throw ShapeError(std::string(to_string(kind())) + " applies to single signals only");
  if (diag->factors != z.num_factors()) throw ShapeError("diagonal factor count mismatch");
  return ProductSignal::replicate(z.mean(), z.num_factors());
}

bool operator==(const ConstraintSet& a, const ConstraintSet& b) {
  if (a.variant_.index() != b.variant_.index()) return false;
  return std::visit(
      [&](const auto& lhs) {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b.variant_);
        if constexpr (std::is_same_v<T, Amplitude>) {
          return lhs.map == rhs.map && lhs.radii == rhs.radii;
        } else if constexpr (std::is_same_v<T, NonnegRealSupport>) {
          return lhs.support == rhs.support && lhs.mode == rhs.mode;
        } else if constexpr (std::is_same_v<T, Sparsity>) {
          return lhs.s == rhs.s;
        } else if constexpr (std::is_same_v<T, SparseNonnegCone>) {
          return lhs.s == rhs.s && lhs.support == rhs.support;
        } else if constexpr (std::is_same_v<T, Diagonal>) {
          return lhs.factors == rhs.factors;
        } else {
          return lhs.map == rhs.map && *lhs.inner == *rhs.inner;
        }
      },
      a.variant_);
}

Signal project(const ConstraintSet& set, const Signal& z) { return set.project(z); }

ProductSignal project(const ConstraintSet& set, const ProductSignal& z) { return set.project(z); }

Signal reflect(const ConstraintSet& set, const Signal& z) {
  Signal r = set.project(z);
  r *= 2.0;
  r -= z;
  return r;
}

ProductSignal reflect(const ConstraintSet& set, const ProductSignal& z) {
  ProductSignal r = set.project(z);
  r *= 2.0;
  r -= z;
  return r;
}

double set_distance(const ConstraintSet& set, const Signal& z) {
  if (const auto* amp = std::get_if<Amplitude>(&set.variant())) return amplitude_distance(*amp, z);
  if (const auto* pre = std::get_if<Preimage>(&set.variant())) {
    return set_distance(*pre->inner, pre->map.apply(z));
  }
  return norm(z - set.project(z));
}

double set_distance(const ConstraintSet& set, const ProductSignal& z) {
  return norm(z - set.project(z));
}

std::string_view to_string(SetKind kind) noexcept {
  switch (kind) {
    case SetKind::kAmplitude:
      return "amplitude";
    case SetKind::kNonnegRealSupport:
      return "nonneg_real_support";
    case SetKind::kSparsity:
      return "sparsity";
    case SetKind::kSparseNonnegCone:
      return "sparse_nonneg_cone";
    case SetKind::kDiagonal:
      return "diagonal";
    case SetKind::kPreimage:
      return "preimage";
  }
  return "unknown";
}

}  // namespace proxbench
