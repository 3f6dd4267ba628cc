#include "proxbench/run.hpp"

#include <cmath>
#include <utility>

#include "proxbench/error.hpp"
#include "proxbench/metrics.hpp"

namespace proxbench {
namespace {

template <class State, class Step, class Change, class Estimate>
RunResult drive(AlgorithmKind kind, const Problem& problem, const Termination& term, State state, Step step,
                Change change, Estimate estimate) {
  RunResult result;
  result.kind = kind;
  for (std::size_t k = 1; k <= term.max_iter; ++k) {
    State next;
    double delta = 0.0;
    try {
      next = step(state);
      delta = change(state, next);
    } catch (const NumericError&) {
      result.diverged = true;
      break;
    }
    if (!std::isfinite(delta)) {
      result.diverged = true;
      break;
    }
    state = std::move(next);
    result.iterations = k;
    result.final_change = delta;
    if (term.trace) result.trace.push_back({delta, feasibility_gap(problem, estimate(state))});
    if (delta < term.tol) {
      result.converged = true;
      break;
    }
  }
  result.estimate = estimate(state);
  result.final_gap = feasibility_gap(problem, result.estimate);
  return result;
}

Signal product_estimate(const Problem& problem, const ProductSignal& z) {
  return problem.product_set().project(z).mean();
}

// x alone does not move on the first step (x^1 = z0), so the splitting
// variables z_j enter the change as well.
double admm1_change(const Admm1State& a, const Admm1State& b, bool phase_rotation) {
  double sq = std::pow(termination_change(a.x, b.x, phase_rotation), 2);
  for (std::size_t j = 0; j < a.z.size(); ++j) sq += std::pow(termination_change(a.z[j], b.z[j], phase_rotation), 2);
  return std::sqrt(sq);
}

}  // namespace

double termination_change(const Signal& prev, const Signal& next, bool phase_rotation) {
  if (phase_rotation && next.block_dim() == 2) return phase_aligned_distance(next, prev);
  return iterate_change(prev, next);
}

RunResult run(const AlgorithmSpec& spec, const Problem& problem, const Signal& z0, const Termination& term) {
  spec.validate();
  problem.check(z0);
  if (!(term.tol > 0.0)) throw ConfigError("tol", "must be positive");

  const Signal start = spec.warm_start_iters > 0 ? wf_warm_start(problem, spec.warm_start_iters, z0) : z0;
  const auto& sets = problem.sets();
  const bool two_sets = sets.size() == 2;
  const bool rot = term.phase_rotation;

  auto signal_change = [rot](const Signal& a, const Signal& b) { return termination_change(a, b, rot); };
  auto identity = [](const Signal& z) { return z; };
  auto product_change = [](const ProductSignal& a, const ProductSignal& b) { return iterate_change(a, b); };
  auto product_shadow = [&problem](const ProductSignal& z) { return product_estimate(problem, z); };
  const AlgorithmKind kind = spec.kind;

  switch (kind) {
    case AlgorithmKind::kCP:
      return drive(kind, problem, term, start, [&](const Signal& z) { return cp_step(problem, z); },
                   signal_change, identity);
    case AlgorithmKind::kAVP:
      return drive(kind, problem, term, start, [&](const Signal& z) { return avp_step(problem, z); },
                   signal_change, identity);
    case AlgorithmKind::kDYREPR:
      return drive(kind, problem, term, start, [&](const Signal& z) { return dyrepr_step(problem, spec.c, z); },
                   signal_change, identity);
    case AlgorithmKind::kCDR:
      return drive(kind, problem, term, start, [&](const Signal& z) { return cdr_step(problem, z); },
                   signal_change, [&](const Signal& z) { return sets[0].project(z); });
    case AlgorithmKind::kCDRL:
      return drive(
          kind, problem, term, start,
          [&](const Signal& z) { return cdrl_step(problem, spec.lambda, z, spec.cdrl_inner_relax); },
          signal_change, [&](const Signal& z) { return sets[0].project(z); });
    case AlgorithmKind::kDR:
      if (two_sets) {
        return drive(kind, problem, term, start, [&](const Signal& z) { return dr_step(sets[0], sets[1], z); },
                     signal_change, [&](const Signal& z) { return sets[1].project(z); });
      }
      return drive(
          kind, problem, term, ProductSignal::replicate(start, sets.size()),
          [&](const ProductSignal& z) { return dr_step(problem.diagonal(), problem.product_set(), z); },
          product_change, product_shadow);
    case AlgorithmKind::kDRL:
      if (two_sets) {
        return drive(
            kind, problem, term, start,
            [&](const Signal& z) { return drl_pair_step(sets[0], sets[1], spec.lambda, z); }, signal_change,
            [&](const Signal& z) { return sets[1].project(z); });
      }
      return drive(kind, problem, term, ProductSignal::replicate(start, sets.size()),
                   [&](const ProductSignal& z) { return drl_product_step(problem, spec.lambda, z); },
                   product_change, product_shadow);
    case AlgorithmKind::kDRAP:
      return drive(kind, problem, term, ProductSignal::replicate(start, sets.size()),
                   [&](const ProductSignal& z) { return drap_step(problem, spec.lambda, z); }, product_change,
                   product_shadow);
    case AlgorithmKind::kFPG:
      return drive(
          kind, problem, term, fpg_init(problem, start),
          [&](const FpgState& s) { return fpg_step(problem, s); },
          [](const FpgState& a, const FpgState& b) { return iterate_change(a.z, b.z); },
          [&](const FpgState& s) { return product_estimate(problem, s.z); });
    case AlgorithmKind::kADMM1:
      return drive(
          kind, problem, term, admm1_init(problem, start),
          [&](const Admm1State& s) { return admm1_step(problem, spec.eta, s, spec.admm1_scaled_dual); },
          [rot](const Admm1State& a, const Admm1State& b) { return admm1_change(a, b, rot); },
          [](const Admm1State& s) { return s.x; });
    case AlgorithmKind::kADMM2:
      return drive(
          kind, problem, term, admm2_init(problem, start),
          [&](const Admm2State& s) { return admm2_step(problem, spec.rho, s); },
          [rot](const Admm2State& a, const Admm2State& b) { return termination_change(a.z, b.z, rot); },
          [](const Admm2State& s) { return s.z; });
    case AlgorithmKind::kQNAVP:
      return drive(
          kind, problem, term, qnavp_init(problem, start),
          [&](const QuasiNewtonState& s) { return qnavp_step(problem, spec.quasi_newton, s); },
          [rot](const QuasiNewtonState& a, const QuasiNewtonState& b) { return termination_change(a.z, b.z, rot); },
          [](const QuasiNewtonState& s) { return s.z; });
    case AlgorithmKind::kWF: {
      const double mu = spec.mu ? *spec.mu : wf_default_mu(problem);
      const double z0_norm_sq = squared_norm(start);
      return drive(kind, problem, term, start,
                   [&](const Signal& z) { return wf_step(problem, mu, z0_norm_sq, z); }, signal_change, identity);
    }
  }
  throw ConfigError("kind", "unknown algorithm");
}

}  // namespace proxbench
