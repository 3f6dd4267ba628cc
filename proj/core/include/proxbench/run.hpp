#pragma once

#include <cstddef>
#include <vector>

#include "proxbench/algorithms.hpp"
#include "proxbench/problem.hpp"
#include "proxbench/signal.hpp"

namespace proxbench {

struct Termination {
  double tol = 1e-10;
  std::size_t max_iter = 1000;
  bool trace = false;
  // Also measure the change modulo a global phase (d = 2 single-signal iterates).
  bool phase_rotation = false;

  friend bool operator==(const Termination&, const Termination&) = default;
};

struct TraceRow {
  double iterate_change = 0.0;
  double gap = 0.0;
  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct RunResult {
  AlgorithmKind kind = AlgorithmKind::kCP;
  std::size_t iterations = 0;
  bool converged = false;
  bool diverged = false;
  Signal estimate;  // the algorithm's solution estimate (shadow for DR-type methods)
  double final_change = 0.0;
  double final_gap = 0.0;
  std::vector<TraceRow> trace;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Change used by the termination test: ||next - prev||, or with
/// `phase_rotation` the phase-aligned distance min_theta ||e^{i theta} next - prev||.
double termination_change(const Signal& prev, const Signal& next, bool phase_rotation);

/// Iterates `spec` from z0 until the iterate change drops below term.tol or
/// term.max_iter steps have been taken. Non-finite iterates end the run with
/// `diverged` set; the estimate is then the last finite one.
RunResult run(const AlgorithmSpec& spec, const Problem& problem, const Signal& z0, const Termination& term);

}  // namespace proxbench
