#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <proxbench/error.hpp>
#include <proxbench/instances.hpp>
#include <proxbench/metrics.hpp>
#include <proxbench/run.hpp>
#include <proxbench/success.hpp>

#include "test_helpers.hpp"

using namespace proxbench;
using namespace proxbench::testing;

namespace {

AlgorithmSpec spec_of(AlgorithmKind kind) { return AlgorithmSpec::defaults(kind); }

}  // namespace

TEST(RunLoop, ZeroIterationCap) {
  const Instance inst = toy_circle_line();
  const Signal z0 = point(0.2, 2.0);
  const RunResult r = run(spec_of(AlgorithmKind::kCP), inst.problem, z0, Termination{1e-10, 0});
  EXPECT_EQ(r.iterations, 0u);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.estimate, z0);
}

TEST(RunLoop, RejectsNonPositiveTolerance) {
  const Instance inst = toy_circle_line();
  EXPECT_THROW(run(spec_of(AlgorithmKind::kCP), inst.problem, point(0.0, 1.0), Termination{0.0, 10}), ConfigError);
  AlgorithmSpec bad = spec_of(AlgorithmKind::kDRL);
  bad.lambda = -0.1;
  EXPECT_THROW(run(bad, inst.problem, point(0.0, 1.0), Termination{}), ConfigError);
}

TEST(RunLoop, DeterministicForEveryAlgorithm) {
  const Instance inst = gen_cdp(Shape{16}, 3, 4);
  const Signal z0 = random_start(inst, 5);
  for (auto kind : all_algorithm_kinds()) {
    const Termination term{1e-10, 30, true};
    const RunResult a = run(spec_of(kind), inst.problem, z0, term);
    const RunResult b = run(spec_of(kind), inst.problem, z0, term);
    EXPECT_EQ(a, b) << to_string(kind);
  }
}

TEST(RunLoop, TraceHasOneRowPerIteration) {
  const Instance inst = gen_srcloc(10, false, 3);
  const Signal z0 = random_start(inst, 4);
  for (auto kind : all_algorithm_kinds()) {
    const RunResult r = run(spec_of(kind), inst.problem, z0, Termination{1e-11, 300, true});
    EXPECT_EQ(r.trace.size(), r.iterations) << to_string(kind);
    if (r.converged) EXPECT_LT(r.trace.back().iterate_change, 1e-11) << to_string(kind);
    if (!r.trace.empty()) EXPECT_EQ(r.trace.back().iterate_change, r.final_change) << to_string(kind);
  }
}

TEST(RunLoop, AveragedProjectionsGapNonIncreasingOnTwoLines) {
  const Instance inst = toy_two_lines(0.3);
  const RunResult r = run(spec_of(AlgorithmKind::kAVP), inst.problem, point(4.0, 7.0), Termination{1e-12, 5000, true});
  ASSERT_TRUE(r.converged);
  for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_LE(r.trace[k].gap, r.trace[k - 1].gap + 1e-15);
}

TEST(RunLoop, CyclicProjectionsRateOnTwoLines) {
  for (double angle : {0.2, 0.5, 1.0}) {
    const Instance inst = toy_two_lines(angle);
    const Signal z0 = point(3.0, 5.0);
    const double tol = 1e-11;
    const RunResult r = run(spec_of(AlgorithmKind::kCP), inst.problem, z0, Termination{tol, 100000, true});
    ASSERT_TRUE(r.converged);

    // After the first sweep the iterate sits on the axis and shrinks by cos^2
    // per sweep, so change_k = sin^2 cos^{2(k-2)} |z_1| for k >= 2.
    const double c2 = std::cos(angle) * std::cos(angle);
    const double z1 = norm(cp_step(inst.problem, z0));
    std::size_t predicted = 2;
    while ((1.0 - c2) * std::pow(c2, static_cast<double>(predicted - 2)) * z1 >= tol) ++predicted;
    EXPECT_NEAR(static_cast<double>(r.iterations), static_cast<double>(predicted), 2.0) << "angle " << angle;
    for (std::size_t k = 2; k + 1 < r.trace.size(); ++k) {
      EXPECT_NEAR(r.trace[k].iterate_change / r.trace[k - 1].iterate_change, c2, 1e-6);
    }
  }
}

TEST(RunLoop, DivergenceIsReported) {
  const Instance inst = gen_cdp(Shape{16}, 3, 6);
  AlgorithmSpec spec = spec_of(AlgorithmKind::kWF);
  spec.mu = 1e6;
  const Signal z0 = random_start(inst, 7);
  const RunResult r = run(spec, inst.problem, z0, Termination{1e-10, 1000});
  EXPECT_TRUE(r.diverged);
  EXPECT_FALSE(r.converged);
  EXPECT_TRUE(r.estimate.all_finite());
}

TEST(RunLoop, PhaseRotationTermination) {
  // A quarter turn of z.
  const Signal z = random_signal(Shape{8}, 2, 1);
  Signal rotated(z.shape(), 2);
  for (std::size_t i = 0; i < z.num_blocks(); ++i) {
    rotated(i, 0) = -z(i, 1);
    rotated(i, 1) = z(i, 0);
  }
  EXPECT_NEAR(termination_change(z, rotated, false), std::sqrt(2.0) * norm(z), 1e-12);
  EXPECT_LT(termination_change(z, rotated, true), 1e-12);
}

TEST(RunLoop, TwoSetDouglasRachfordReportsShadow) {
  const Instance inst = toy_circle_line();
  const RunResult r = run(spec_of(AlgorithmKind::kDR), inst.problem, point(0.3, 1.7), Termination{1e-12, 10000});
  ASSERT_TRUE(r.converged);
  EXPECT_LT(set_distance(inst.problem.sets()[1], r.estimate), 1e-12);
  EXPECT_LT(feasibility_gap(inst.problem, r.estimate), 1e-9);
}

TEST(RunLoop, ToysConvergeForTheAveragedMethods) {
  const Instance inst = toy_circle_line();
  for (auto kind : {AlgorithmKind::kCP, AlgorithmKind::kAVP, AlgorithmKind::kCDR, AlgorithmKind::kCDRL,
                    AlgorithmKind::kDRL, AlgorithmKind::kDRAP, AlgorithmKind::kFPG, AlgorithmKind::kQNAVP}) {
    const RunResult r = run(spec_of(kind), inst.problem, point(0.4, 1.5), Termination{1e-11, 10000});
    EXPECT_TRUE(r.converged) << to_string(kind);
    EXPECT_LT(truth_distance(inst, r.estimate), 1e-6) << to_string(kind);
  }
}
