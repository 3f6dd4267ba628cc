#include <cmath>
#include <random>

#include "proxbench/algorithms.hpp"
#include "proxbench/error.hpp"

namespace proxbench {
namespace {

template <class Fn>
void for_each_amplitude(const Problem& problem, Fn&& fn) {
  for (const auto& set : problem.sets()) {
    if (const auto* a = std::get_if<Amplitude>(&set.variant())) fn(*a);
  }
}

}  // namespace

SmoothValue squared_amplitude_objective(const Problem& problem, const Signal& z) {
  problem.check(z);
  SmoothValue out{0.0, problem.zero_signal()};
  for_each_amplitude(problem, [&](const Amplitude& a) {
    Signal w = a.map.apply(z);
    const std::size_t d = w.block_dim();
    for (std::size_t i = 0; i < w.num_blocks(); ++i) {
      double sq = 0.0;
      for (std::size_t c = 0; c < d; ++c) sq += w(i, c) * w(i, c);
      const double r = sq - a.radii[i] * a.radii[i];
      out.value += 0.5 * r * r;
      for (std::size_t c = 0; c < d; ++c) w(i, c) *= 2.0 * r;
    }
    out.gradient += a.map.adjoint_linear(w);
  });
  return out;
}

Signal wf_step(const Problem& problem, double mu, double z0_norm_sq, const Signal& z) {
  if (!(z0_norm_sq > 0.0)) throw NumericError("WF needs a nonzero starting point");
  const SmoothValue g = squared_amplitude_objective(problem, z);
  Signal next = z;
  axpy(-mu / z0_norm_sq, g.gradient, next);
  if (!next.all_finite()) throw NumericError("WF produced a non-finite iterate");
  return next;
}

double wf_default_mu(const Problem& problem) {
  std::size_t m = 0;
  for_each_amplitude(problem, [&](const Amplitude&) { ++m; });
  if (m == 0) throw ShapeError("WF needs amplitude constraints");
  return 0.1 * static_cast<double>(problem.num_blocks()) / static_cast<double>(m);
}

Signal wf_warm_start(const Problem& problem, std::size_t iters, const Signal& start) {
  problem.check(start);
  std::size_t m = 0;
  double data = 0.0;
  const Amplitude* first = nullptr;
  for_each_amplitude(problem, [&](const Amplitude& a) {
    if (first == nullptr) first = &a;
    ++m;
    for (double b : a.radii) data += b * b;
  });
  if (m == 0 || !(data > 0.0)) throw NumericError("warm start needs nonzero amplitude data");
  const double weight = 1.0 / (static_cast<double>(problem.num_blocks()) * static_cast<double>(m));

  Signal z = start;
  double z_norm = norm(z);
  if (!(z_norm > 0.0)) throw NumericError("warm start needs a nonzero start");
  z *= 1.0 / z_norm;
  for (std::size_t k = 0; k < iters; ++k) {
    Signal y = problem.zero_signal();
    for_each_amplitude(problem, [&](const Amplitude& a) {
      Signal w = a.map.apply(z);
      if (!a.map.is_linear()) w -= a.map.apply(problem.zero_signal());
      for (std::size_t i = 0; i < w.num_blocks(); ++i) {
        const double b2 = a.radii[i] * a.radii[i];
        for (std::size_t c = 0; c < w.block_dim(); ++c) w(i, c) *= b2;
      }
      y += a.map.adjoint_linear(w);
    });
    y *= weight;
    const double y_norm = norm(y);
    if (!(y_norm > 0.0)) throw NumericError("warm start power iteration collapsed");
    z = std::move(y);
    z *= 1.0 / y_norm;
  }

  double b1 = 0.0;
  for (double b : first->radii) b1 += b * b;
  Signal image = first->map.apply(z);
  if (!first->map.is_linear()) image -= first->map.apply(problem.zero_signal());
  const double image_norm = norm(image);
  z *= std::sqrt(b1) / image_norm;
  return z;
}

Signal wf_warm_start(const Problem& problem, std::size_t iters, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Signal start = problem.zero_signal();
  for (double& v : start.values()) v = normal(rng);
  return wf_warm_start(problem, iters, start);
}

}  // namespace proxbench
