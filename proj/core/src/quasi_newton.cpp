#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "proxbench/algorithms.hpp"
#include "proxbench/error.hpp"

namespace proxbench {
namespace {

double objective_value(const Problem& problem, const Signal& z) {
  return squared_distance_objective(problem, z).value;
}

// Dogleg step for min g'p + 1/2 p'Bp subject to ||p|| <= radius.
Signal dogleg(const std::deque<CurvaturePair>& pairs, double scaling, const Signal& g, double radius) {
  Signal newton = lbfgs_apply_inverse(pairs, scaling, g);
  newton *= -1.0;
  if (norm(newton) <= radius) return newton;

  const double gg = squared_norm(g);
  const double gbg = dot(g, lbfgs_apply(pairs, scaling, g));
  const double gnorm = std::sqrt(gg);
  if (!(gbg > 0.0)) {
    Signal p = g;
    p *= -radius / gnorm;
    return p;
  }
  Signal cauchy = g;
  cauchy *= -gg / gbg;
  const double cauchy_norm = norm(cauchy);
  if (cauchy_norm >= radius) {
    cauchy *= radius / cauchy_norm;
    return cauchy;
  }
  // ||p_U + tau (p_B - p_U)|| = radius with tau in [0, 1].
  const Signal diff = newton - cauchy;
  const double a = squared_norm(diff);
  const double b = 2.0 * dot(cauchy, diff);
  const double c = cauchy_norm * cauchy_norm - radius * radius;
  const double tau = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
  Signal p = cauchy;
  axpy(tau, diff, p);
  return p;
}

}  // namespace

Signal lbfgs_apply_inverse(const std::deque<CurvaturePair>& pairs, double scaling, const Signal& v) {
  const std::size_t k = pairs.size();
  std::vector<double> alpha(k);
  std::vector<double> rho(k);
  Signal q = v;
  for (std::size_t i = k; i-- > 0;) {
    rho[i] = 1.0 / dot(pairs[i].y, pairs[i].s);
    alpha[i] = rho[i] * dot(pairs[i].s, q);
    axpy(-alpha[i], pairs[i].y, q);
  }
  q *= 1.0 / scaling;
  for (std::size_t i = 0; i < k; ++i) {
    const double beta = rho[i] * dot(pairs[i].y, q);
    axpy(alpha[i] - beta, pairs[i].s, q);
  }
  return q;
}

Signal lbfgs_apply(const std::deque<CurvaturePair>& pairs, double scaling, const Signal& v) {
  const std::size_t k = pairs.size();
  Signal out = v;
  out *= scaling;
  if (k == 0) return out;

  // B = sigma I - [sigma S, Y] M^{-1} [sigma S'; Y'],  M = [[sigma S'S, L], [L', -D]].
  Eigen::MatrixXd m(2 * k, 2 * k);
  Eigen::VectorXd w(2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      m(i, j) = scaling * dot(pairs[i].s, pairs[j].s);
      const double sy = dot(pairs[i].s, pairs[j].y);
      m(i, k + j) = i > j ? sy : 0.0;
      m(k + j, i) = m(i, k + j);
      m(k + i, k + j) = i == j ? -sy : 0.0;
    }
    w(i) = scaling * dot(pairs[i].s, v);
    w(k + i) = dot(pairs[i].y, v);
  }
  const Eigen::VectorXd q = m.fullPivLu().solve(w);
  for (std::size_t i = 0; i < k; ++i) {
    axpy(-scaling * q(i), pairs[i].s, out);
    axpy(-q(k + i), pairs[i].y, out);
  }
  return out;
}

void update_curvature_memory(QuasiNewtonState& state, CurvaturePair pair, const QuasiNewtonOptions& options) {
  const double sy = dot(pair.s, pair.y);
  if (!(sy > options.curvature_floor)) {
    if (!state.pairs.empty()) state.pairs.pop_front();
    return;
  }
  state.scaling = squared_norm(pair.y) / sy;
  state.pairs.push_back(std::move(pair));
  while (state.pairs.size() > options.memory) state.pairs.pop_front();
}

QuasiNewtonState qnavp_init(const Problem& problem, const Signal& z0) {
  problem.check(z0);
  auto fg = squared_distance_objective(problem, z0);
  QuasiNewtonState state;
  state.z = z0;
  state.value = fg.value;
  state.gradient = std::move(fg.gradient);
  return state;
}

QuasiNewtonState qnavp_step(const Problem& problem, const QuasiNewtonOptions& options,
                            const QuasiNewtonState& state) {
  if (!std::isfinite(state.value) || !state.gradient.all_finite()) {
    throw NumericError("QNAvP objective is not finite");
  }
  const Signal& g = state.gradient;
  const double gg = squared_norm(g);
  if (gg == 0.0) return state;

  QuasiNewtonState next = state;
  Signal trial;
  if (state.pairs.empty()) {
    // Backtracking Armijo along the steepest descent direction.
    double t = 1.0;
    std::size_t tries = 0;
    for (;;) {
      trial = state.z;
      axpy(-t, g, trial);
      const double value = objective_value(problem, trial);
      if (value <= state.value - options.armijo_slope * t * gg) break;
      if (++tries > options.max_radius_reductions) throw NumericError("QNAvP line search failed");
      t *= options.backtrack;
    }
    if (!std::isfinite(next.radius)) next.radius = t * std::sqrt(gg);
  } else {
    double radius = state.radius;
    std::size_t tries = 0;
    for (;;) {
      const Signal p = dogleg(state.pairs, state.scaling, g, radius);
      const double p_norm = norm(p);
      trial = state.z + p;
      const double value = objective_value(problem, trial);
      const double predicted = -(dot(g, p) + 0.5 * dot(p, lbfgs_apply(state.pairs, state.scaling, p)));
      const double actual = state.value - value;
      const double ratio = predicted > 0.0 ? actual / predicted : -1.0;
      if (ratio > options.ratio_threshold) {
        if (ratio > 0.75 && p_norm >= 0.99 * radius) radius *= 2.0;
        else if (ratio < 0.25) radius = 0.25 * p_norm;
        next.radius = radius;
        break;
      }
      if (++tries > options.max_radius_reductions) throw NumericError("QNAvP trust region failed");
      radius = 0.25 * p_norm;
      if (!(radius > 0.0)) throw NumericError("QNAvP trust region collapsed");
    }
  }

  auto fg = squared_distance_objective(problem, trial);
  if (!std::isfinite(fg.value) || !fg.gradient.all_finite()) {
    throw NumericError("QNAvP objective is not finite");
  }
  CurvaturePair pair{trial - state.z, fg.gradient - state.gradient};
  next.z = std::move(trial);
  next.value = fg.value;
  next.gradient = std::move(fg.gradient);
  update_curvature_memory(next, std::move(pair), options);
  return next;
}

}  // namespace proxbench
