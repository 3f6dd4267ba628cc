#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <proxbench/constraint_set.hpp>
#include <proxbench/error.hpp>
#include <proxbench/metrics.hpp>
#include <proxbench/problem.hpp>

#include "test_helpers.hpp"

using namespace proxbench;
using namespace proxbench::testing;

namespace {

constexpr double kTight = 1e-12;

ConstraintSet line_at(double angle) {
  const Signal rot = point(std::cos(angle), -std::sin(angle));
  return ConstraintSet::preimage(MeasurementMap(Transform::kIdentity, PointwiseMask{rot}),
                                 ConstraintSet::nonneg_real_support({}, SupportMode::kReal));
}

std::vector<double> random_radii(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  std::vector<double> r(n);
  for (double& v : r) v = u(rng);
  return r;
}

struct NamedSet {
  const char* name;
  ConstraintSet set;
  bool cone;
};

std::vector<NamedSet> signal_sets(const Shape& shape) {
  const std::size_t n = shape.num_blocks();
  std::vector<std::uint8_t> support(n, 1);
  for (std::size_t i = 0; i < n; i += 3) support[i] = 0;
  const MeasurementMap fourier(Transform::kDft1D, PointwiseMask{random_mask(shape, 5)});
  return {
      {"amplitude", ConstraintSet::amplitude(fourier, random_radii(n, 6)), false},
      {"nonneg_real_support", ConstraintSet::nonneg_real_support(support), true},
      {"real", ConstraintSet::nonneg_real_support({}, SupportMode::kReal), true},
      {"support_only", ConstraintSet::nonneg_real_support(support, SupportMode::kSupportOnly), true},
      {"sparsity", ConstraintSet::sparsity(3), true},
      {"sparse_nonneg_cone", ConstraintSet::sparse_nonneg_cone(3), true},
      {"preimage_cone", ConstraintSet::preimage(fourier, ConstraintSet::nonneg_real_support(support)), true},
      {"preimage_affine",
       ConstraintSet::preimage(MeasurementMap(Transform::kIdentity, Translate{{0.5, -1.0}}),
                               ConstraintSet::sparsity(2)),
       false},
  };
}

}  // namespace

TEST(AmplitudeSet, ScalesToRadius) {
  const auto circle = ConstraintSet::amplitude(MeasurementMap::identity(), {10.0});
  EXPECT_LE(iterate_change(project(circle, point(3.0, 4.0)), point(6.0, 8.0)), kTight);
  const auto small = ConstraintSet::amplitude(MeasurementMap::identity(), {5.0});
  EXPECT_EQ(project(small, point(0.0, 0.0)), point(5.0, 0.0));
}

TEST(AmplitudeSet, ProjectionHasMeasuredModuli) {
  const Shape shape{16};
  const MeasurementMap map(Transform::kDft1D, PointwiseMask{random_mask(shape, 1)});
  const auto radii = random_radii(16, 2);
  const auto set = ConstraintSet::amplitude(map, radii);
  const Signal p = project(set, random_signal(shape, 2, 3));
  const Signal y = apply_map(map, p);
  for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(std::hypot(y(i, 0), y(i, 1)), radii[i], 1e-12);
}

TEST(AmplitudeSet, NearestAmongSampledMembers) {
  // Two blocks behind a masked DFT: every member is A^*(b_0 e^{i a}, b_1 e^{i c}).
  const Shape shape{2};
  const MeasurementMap map(Transform::kDft1D, PointwiseMask{random_mask(shape, 8)});
  const std::vector<double> radii{1.3, 0.4};
  const auto set = ConstraintSet::amplitude(map, radii);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Signal z = random_signal(shape, 2, 40 + s);
    const double d = iterate_change(z, project(set, z));
    EXPECT_NEAR(d, set_distance(set, z), 1e-12);
    double best = 1e300;
    for (int k = 0; k < 100000; ++k) {
      Signal y(shape, 2);
      for (std::size_t i = 0; i < 2; ++i) {
        const double t = phase(rng);
        y(i, 0) = radii[i] * std::cos(t);
        y(i, 1) = radii[i] * std::sin(t);
      }
      best = std::min(best, iterate_change(z, apply_adjoint(map, y)));
    }
    EXPECT_LE(d, best + 1e-12);
    EXPECT_GE(d, best - 1e-3);
  }
}

TEST(AmplitudeSet, RejectsNegativeRadius) {
  EXPECT_THROW(ConstraintSet::amplitude(MeasurementMap::identity(), {-1.0}), ShapeError);
  const auto set = ConstraintSet::amplitude(MeasurementMap::identity(), {1.0, 1.0});
  EXPECT_THROW(project(set, point(1.0, 0.0)), ShapeError);
}

TEST(SupportSet, Modes) {
  const auto nonneg = ConstraintSet::nonneg_real_support({});
  EXPECT_EQ(project(nonneg, point(-1.0, 2.0)), point(0.0, 0.0));
  EXPECT_EQ(project(nonneg, point(3.0, -2.0)), point(3.0, 0.0));
  const auto real = ConstraintSet::nonneg_real_support({}, SupportMode::kReal);
  EXPECT_EQ(project(real, point(-1.0, 2.0)), point(-1.0, 0.0));
  const Signal z(Shape{2}, 2, {1.0, 2.0, 3.0, 4.0});
  const auto support_only = ConstraintSet::nonneg_real_support({0, 1}, SupportMode::kSupportOnly);
  EXPECT_EQ(project(support_only, z), Signal(Shape{2}, 2, {0.0, 0.0, 3.0, 4.0}));
  EXPECT_THROW(project(support_only, point(1.0, 1.0)), ShapeError);
}

TEST(SparsitySet, KeepsLargestBlocksAgainstExhaustiveSearch) {
  // Block norms 3, 1, 4, 1, 5 in random directions.
  const std::vector<double> norms{3.0, 1.0, 4.0, 1.0, 5.0};
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  Signal z(Shape{5}, 2);
  for (std::size_t i = 0; i < 5; ++i) {
    const double t = phase(rng);
    z(i, 0) = norms[i] * std::cos(t);
    z(i, 1) = norms[i] * std::sin(t);
  }
  const Signal p = project(ConstraintSet::sparsity(2), z);

  double best = 1e300;
  Signal best_point;
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t b = a + 1; b < 5; ++b) {
      Signal cand(Shape{5}, 2);
      for (std::size_t i : {a, b}) {
        cand(i, 0) = z(i, 0);
        cand(i, 1) = z(i, 1);
      }
      const double d = iterate_change(z, cand);
      if (d < best) {
        best = d;
        best_point = cand;
      }
    }
  }
  EXPECT_EQ(p, best_point);
  EXPECT_EQ(p(2, 0), z(2, 0));
  EXPECT_EQ(p(4, 1), z(4, 1));
  EXPECT_EQ(p(0, 0), 0.0);
  EXPECT_THROW(ConstraintSet::sparsity(0), ShapeError);
  EXPECT_THROW(project(ConstraintSet::sparsity(6), z), ShapeError);
}

TEST(SparseNonnegCone, MatchesExhaustiveSearch) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Signal z = random_signal(Shape{6}, 2, 500 + s);
    const Signal p = project(ConstraintSet::sparse_nonneg_cone(2), z);
    const auto nonneg = ConstraintSet::nonneg_real_support({});
    double best = 1e300;
    for (std::size_t a = 0; a < 6; ++a) {
      for (std::size_t b = a + 1; b < 6; ++b) {
        std::vector<std::uint8_t> support(6, 0);
        support[a] = support[b] = 1;
        const Signal cand = project(ConstraintSet::nonneg_real_support(support), z);
        best = std::min(best, iterate_change(z, cand));
      }
    }
    EXPECT_NEAR(iterate_change(z, p), best, kTight);
  }
}

TEST(DiagonalSet, AveragesAndReflects) {
  const ProductSignal z({point(1.0, 0.0), point(3.0, 2.0), point(-1.0, 4.0)});
  const auto diag = ConstraintSet::diagonal(3);
  const ProductSignal p = project(diag, z);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_LE(iterate_change(p[j], point(1.0, 2.0)), kTight);
  const ProductSignal r = reflect(diag, z);
  EXPECT_LE(iterate_change(r[0], point(1.0, 4.0)), kTight);
  EXPECT_LE(iterate_change(r[2], point(3.0, 0.0)), kTight);
  EXPECT_THROW(ConstraintSet::diagonal(1), ShapeError);
  EXPECT_THROW(project(diag, point(1.0, 1.0)), ShapeError);
}

TEST(DiagonalSet, IsLinear) {
  const auto diag = ConstraintSet::diagonal(2);
  const ProductSignal a({random_signal(Shape{4}, 2, 1), random_signal(Shape{4}, 2, 2)});
  const ProductSignal b({random_signal(Shape{4}, 2, 3), random_signal(Shape{4}, 2, 4)});
  const ProductSignal lhs = project(diag, 2.0 * a + b);
  const ProductSignal rhs = 2.0 * project(diag, a) + project(diag, b);
  EXPECT_LE(iterate_change(lhs, rhs), kTight);
}

TEST(PreimageSet, LineThroughOrigin) {
  const auto line = line_at(std::numbers::pi / 4.0);
  EXPECT_LE(iterate_change(project(line, point(1.0, 1.0)), point(1.0, 1.0)), kTight);
  EXPECT_LE(iterate_change(project(line, point(1.0, 0.0)), point(0.5, 0.5)), kTight);
  EXPECT_NEAR(set_distance(line, point(1.0, 0.0)), std::sqrt(0.5), kTight);
}

TEST(PreimageSet, CompositionIdentity) {
  const Shape shape{8};
  const MeasurementMap map(Transform::kDft1D, PointwiseMask{random_mask(shape, 31)});
  const auto inner = ConstraintSet::sparse_nonneg_cone(3);
  const auto set = ConstraintSet::preimage(map, inner);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Signal z = random_signal(shape, 2, 900 + s);
    const Signal expect = apply_adjoint(map, project(inner, apply_map(map, z)));
    EXPECT_LE(iterate_change(project(set, z), expect), kTight);
  }
}

TEST(AllSets, IdempotentReflectionAndDistance) {
  const Shape shape{9};
  for (const auto& [name, set, cone] : signal_sets(shape)) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Signal z = random_signal(shape, 2, 1000 + s);
      const Signal p = project(set, z);
      EXPECT_LE(iterate_change(project(set, p), p), 1e-12 * (1.0 + norm(p))) << name;
      EXPECT_LE(iterate_change(reflect(set, z), 2.0 * p - z), kTight * (1.0 + norm(z))) << name;
      EXPECT_NEAR(set_distance(set, z), iterate_change(z, p), 1e-12 * (1.0 + norm(z))) << name;
    }
  }
}

TEST(AllSets, ConesCommuteWithPositiveScaling) {
  const Shape shape{9};
  for (const auto& [name, set, cone] : signal_sets(shape)) {
    if (!cone) continue;
    for (double t : {0.25, 3.0}) {
      const Signal z = random_signal(shape, 2, 77);
      EXPECT_LE(iterate_change(project(set, t * z), t * project(set, z)), 1e-12 * t * norm(z)) << name;
    }
  }
}

TEST(AllSets, ProjectionIsNoFartherThanOtherMembers) {
  // Distance to the projection is at most the distance to any projected point.
  const Shape shape{9};
  for (const auto& [name, set, cone] : signal_sets(shape)) {
    const Signal z = random_signal(shape, 2, 4242);
    const double d = iterate_change(z, project(set, z));
    for (std::uint64_t s = 0; s < 200; ++s) {
      const Signal member = project(set, random_signal(shape, 2, 5000 + s, 2.0));
      EXPECT_LE(d, iterate_change(z, member) + 1e-12) << name;
    }
  }
}

TEST(ProductSet, ActsFactorwise) {
  const auto a = ConstraintSet::amplitude(MeasurementMap::identity(), {1.0});
  const auto b = ConstraintSet::nonneg_real_support({});
  const ProductSet prod({a, b});
  const ProductSignal z({point(3.0, 4.0), point(-1.0, 2.0)});
  const ProductSignal p = project(prod, z);
  EXPECT_LE(iterate_change(p[0], point(0.6, 0.8)), kTight);
  EXPECT_EQ(p[1], point(0.0, 0.0));
}

TEST(ProblemValidation, RejectsDegenerateSetLists) {
  const auto a = ConstraintSet::amplitude(MeasurementMap::identity(), {1.0});
  EXPECT_THROW(Problem(Shape::scalar(), 2, {a}, false), ShapeError);
  EXPECT_THROW(Problem(Shape::scalar(), 2, {a, ConstraintSet::diagonal(2)}, false), ShapeError);
  const Problem ok(Shape::scalar(), 2, {a, ConstraintSet::nonneg_real_support({})}, true);
  EXPECT_EQ(ok.first_data_index(), 1u);
  EXPECT_EQ(ok.num_data_sets(), 1u);
  EXPECT_NEAR(feasibility_gap(ok, point(2.0, 0.0)), 1.0, kTight);
}
