#include "proxbench/algorithms.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <string>

#include "proxbench/error.hpp"

namespace proxbench {
namespace {

constexpr std::array kAllKinds{
    AlgorithmKind::kCP,   AlgorithmKind::kDR,     AlgorithmKind::kCDR,   AlgorithmKind::kCDRL,
    AlgorithmKind::kADMM1, AlgorithmKind::kADMM2, AlgorithmKind::kAVP,   AlgorithmKind::kDYREPR,
    AlgorithmKind::kQNAVP, AlgorithmKind::kWF,    AlgorithmKind::kFPG,   AlgorithmKind::kDRL,
    AlgorithmKind::kDRAP,
};

}  // namespace

std::span<const AlgorithmKind> all_algorithm_kinds() noexcept { return kAllKinds; }

std::string_view to_string(AlgorithmKind kind) noexcept {
  switch (kind) {
    case AlgorithmKind::kCP: return "CP";
    case AlgorithmKind::kDR: return "DR";
    case AlgorithmKind::kCDR: return "CDR";
    case AlgorithmKind::kCDRL: return "CDRL";
    case AlgorithmKind::kADMM1: return "ADMM1";
    case AlgorithmKind::kADMM2: return "ADMM2";
    case AlgorithmKind::kAVP: return "AVP";
    case AlgorithmKind::kDYREPR: return "DYREPR";
    case AlgorithmKind::kQNAVP: return "QNAVP";
    case AlgorithmKind::kWF: return "WF";
    case AlgorithmKind::kFPG: return "FPG";
    case AlgorithmKind::kDRL: return "DRL";
    case AlgorithmKind::kDRAP: return "DRAP";
  }
  return "?";
}

std::optional<AlgorithmKind> parse_algorithm_kind(std::string_view name) noexcept {
  std::string upper;
  for (char ch : name) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  for (auto kind : kAllKinds) {
    if (to_string(kind) == upper) return kind;
  }
  // Aliases used by the tables.
  if (upper == "AP" || upper == "PG" || upper == "AM") return AlgorithmKind::kAVP;
  return std::nullopt;
}

AlgorithmSpec AlgorithmSpec::defaults(AlgorithmKind kind) {
  AlgorithmSpec spec;
  spec.kind = kind;
  switch (kind) {
    case AlgorithmKind::kCDRL: spec.lambda = 0.33; break;
    case AlgorithmKind::kDRL: spec.lambda = 0.75; break;
    case AlgorithmKind::kDRAP: spec.lambda = 0.55; break;
    default: break;
  }
  return spec;
}

void AlgorithmSpec::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda", "must lie in [0, 1]");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("eta", "must be positive");
  if (rho.empty()) throw ConfigError("rho", "needs at least one entry");
  for (double r : rho) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("rho", "entries must be positive");
  }
  if (mu && (!(*mu > 0.0) || !std::isfinite(*mu))) throw ConfigError("mu", "must be positive");
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("c", "must be positive");
  if (quasi_newton.memory < 1) throw ConfigError("quasi_newton.memory", "must be at least 1");
  if (!(quasi_newton.curvature_floor > 0.0)) {
    throw ConfigError("quasi_newton.curvature_floor", "must be positive");
  }
  if (!(quasi_newton.ratio_threshold > 0.0)) {
    throw ConfigError("quasi_newton.ratio_threshold", "must be positive");
  }
  if (!(quasi_newton.armijo_slope > 0.0 && quasi_newton.armijo_slope < 1.0)) {
    throw ConfigError("quasi_newton.armijo_slope", "must lie in (0, 1)");
  }
  if (!(quasi_newton.backtrack > 0.0 && quasi_newton.backtrack < 1.0)) {
    throw ConfigError("quasi_newton.backtrack", "must lie in (0, 1)");
  }
}

// ---------------------------------------------------------------------------

Signal cp_step(const Problem& problem, const Signal& z) {
  problem.check(z);
  const auto& sets = problem.sets();
  Signal out = z;
  for (std::size_t j = sets.size(); j-- > 0;) out = sets[j].project(out);
  return out;
}

Signal cdr_step(const Problem& problem, const Signal& z) {
  problem.check(z);
  const auto& sets = problem.sets();
  const std::size_t count = sets.size();
  Signal out = z;
  // Factor j pairs (C_j, C_{j+1 mod (m+1)}); factor m is rightmost.
  for (std::size_t j = count; j-- > 0;) out = dr_step(sets[j], sets[(j + 1) % count], out);
  return out;
}

Signal cdrl_step(const Problem& problem, double lambda, const Signal& z, bool inner_relax) {
  problem.check(z);
  const auto& sets = problem.sets();
  const std::size_t count = sets.size();
  Signal out = z;
  for (std::size_t j = count; j-- > 0;) {
    const std::size_t next = (j + 1) % count;
    if (inner_relax && next == 0) {
      // 1/2 (R_{C_m} R_{C_0} + Id) relaxed toward P_{C_m}.
      Signal dr = dr_step(sets[j], sets[next], out);
      dr *= lambda;
      Signal relax = sets[j].project(out);
      relax *= 1.0 - lambda;
      dr += relax;
      out = std::move(dr);
    } else {
      out = drl_pair_step(sets[j], sets[next], lambda, out);
    }
  }
  return out;
}

Signal avp_step(const Problem& problem, const Signal& z) {
  problem.check(z);
  const auto& sets = problem.sets();
  Signal sum = sets.front().project(z);
  for (std::size_t j = 1; j < sets.size(); ++j) sum += sets[j].project(z);
  sum *= 1.0 / static_cast<double>(sets.size());
  return sum;
}

Signal dyrepr_step(const Problem& problem, double c, const Signal& z) {
  problem.check(z);
  Signal next = z;
  for (const auto& set : problem.sets()) {
    Signal residual = z - set.project(z);
    const double dist_sq = squared_norm(residual);
    axpy(-2.0 / (dist_sq + c), residual, next);
  }
  if (!next.all_finite()) throw NumericError("DyRePr produced a non-finite iterate");
  return next;
}

// ---------------------------------------------------------------------------

Admm1State admm1_init(const Problem& problem, const Signal& z0) {
  problem.check(z0);
  const std::size_t m = problem.num_data_sets();
  return Admm1State{z0, std::vector<Signal>(m, z0), std::vector<Signal>(m, problem.zero_signal())};
}

Admm1State admm1_step(const Problem& problem, double eta, const Admm1State& state, bool scaled_dual) {
  const auto& sets = problem.sets();
  const std::size_t first = problem.first_data_index();
  const std::size_t m = problem.num_data_sets();
  if (state.z.size() != m || state.v.size() != m) throw ShapeError("ADMM1 state does not match the problem");

  // Step 1: x = P_{C_0}((1/m) sum_j (z_j - v_j / eta)).
  Signal avg = problem.zero_signal();
  for (std::size_t j = 0; j < m; ++j) {
    avg += state.z[j];
    axpy(-1.0 / eta, state.v[j], avg);
  }
  avg *= 1.0 / static_cast<double>(m);
  Admm1State next;
  next.x = problem.has_qualitative() ? sets[0].project(avg) : std::move(avg);

  next.z.reserve(m);
  next.v.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    // Step 2 as printed, P_{C_j}(x - eta v_j); the scaled form is P_{C_j}(x + v_j / eta).
    Signal arg = next.x;
    axpy(scaled_dual ? 1.0 / eta : -eta, state.v[j], arg);
    next.z.push_back(sets[first + j].project(arg));
    // Step 3: v_j += eta (x - z_j).
    Signal v = state.v[j];
    axpy(eta, next.x - next.z.back(), v);
    next.v.push_back(std::move(v));
  }
  return next;
}

Admm2State admm2_init(const Problem& problem, const Signal& z0) {
  problem.check(z0);
  const auto& sets = problem.sets();
  Signal avg = problem.zero_signal();
  std::vector<Signal> u;
  for (std::size_t j = 0; j < sets.size(); ++j) {
    Signal p = sets[j].project(z0);
    avg += p;
    if (j >= problem.first_data_index()) u.push_back(std::move(p));
  }
  avg *= 1.0 / static_cast<double>(sets.size());
  return Admm2State{std::move(avg), z0, std::move(u)};
}

namespace {

// For a set defined through an affine map A z = L z + t, the term L^* t; zero
// for linear maps and map-free sets. Adding it to 2 z^k - z^{k-1} evaluates the
// extrapolation in the set's measurement frame, where the set is homogeneous.
std::optional<Signal> frame_offset(const Problem& problem, const ConstraintSet& set) {
  const MeasurementMap* map = nullptr;
  if (const auto* a = std::get_if<Amplitude>(&set.variant())) map = &a->map;
  if (const auto* p = std::get_if<Preimage>(&set.variant())) map = &p->map;
  if (!map || map->is_linear()) return std::nullopt;
  return map->adjoint_linear(map->apply(problem.zero_signal()));
}

}  // namespace

Admm2State admm2_step(const Problem& problem, std::span<const double> rho, const Admm2State& state) {
  const auto& sets = problem.sets();
  const std::size_t first = problem.first_data_index();
  const std::size_t m = problem.num_data_sets();
  if (state.u.size() != m) throw ShapeError("ADMM2 state does not match the problem");
  if (rho.size() != 1 && rho.size() != m) throw ShapeError("rho needs one entry or one per data set");
  auto rho_at = [&](std::size_t j) { return rho.size() == 1 ? rho[0] : rho[j]; };

  const Signal step = state.z - state.z_prev;
  Signal extrapolated = state.z;
  extrapolated += step;  // 2 z^k - z^{k-1}

  Admm2State next;
  next.z = problem.zero_signal();
  next.u.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double inv_rho = 1.0 / rho_at(j);
    next.z += state.u[j];
    axpy(inv_rho, step, next.z);
    Signal arg = state.u[j];
    axpy(inv_rho, extrapolated, arg);
    if (auto offset = frame_offset(problem, sets[first + j])) axpy(inv_rho, *offset, arg);
    next.u.push_back(sets[first + j].project(arg));
  }
  next.z *= 1.0 / static_cast<double>(m);
  next.z_prev = state.z;
  return next;
}

// ---------------------------------------------------------------------------

SmoothValue squared_distance_objective(const Problem& problem, const Signal& z) {
  problem.check(z);
  const auto& sets = problem.sets();
  const double weight = 1.0 / static_cast<double>(sets.size());
  SmoothValue out{0.0, problem.zero_signal()};
  for (const auto& set : sets) {
    Signal residual = z - set.project(z);
    out.value += squared_norm(residual);
    out.gradient += residual;
  }
  out.value *= 0.5 * weight;
  out.gradient *= weight;
  return out;
}

// ---------------------------------------------------------------------------

FpgState fpg_init(const Problem& problem, const Signal& z0) {
  problem.check(z0);
  auto lifted = ProductSignal::replicate(z0, problem.num_sets());
  return FpgState{lifted, lifted, 1};
}

FpgState fpg_step(const Problem& problem, const FpgState& state) {
  const ProductSet c = problem.product_set();
  const ConstraintSet d = problem.diagonal();
  FpgState next;
  next.z = c.project(d.project(state.y));
  const double k = static_cast<double>(state.k);
  const double alpha = (k - 1.0) / (k + 2.0);
  next.y = next.z;
  ProductSignal momentum = next.z - state.z;
  momentum *= alpha;
  next.y += momentum;
  next.k = state.k + 1;
  return next;
}

ProductSignal drl_product_step(const Problem& problem, double lambda, const ProductSignal& z) {
  return drl_pair_step(problem.diagonal(), problem.product_set(), lambda, z);
}

ProductSignal drap_step(const Problem& problem, double lambda, const ProductSignal& z) {
  const ProductSet c = problem.product_set();
  const ConstraintSet d = problem.diagonal();
  const ProductSignal pc = c.project(z);
  ProductSignal arg = pc;
  arg *= 1.0 + lambda;
  ProductSignal scaled_z = z;
  scaled_z *= lambda;
  arg -= scaled_z;
  ProductSignal next = d.project(arg);
  ProductSignal correction = pc - z;
  correction *= lambda;
  next -= correction;
  return next;
}

}  // namespace proxbench
