#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "proxbench/constraint_set.hpp"
#include "proxbench/problem.hpp"
#include "proxbench/signal.hpp"

namespace proxbench {

enum class AlgorithmKind : std::uint8_t {
  kCP,      // cyclic projections
  kDR,      // Douglas-Rachford (two sets directly, product space otherwise)
  kCDR,     // cyclic Douglas-Rachford
  kCDRL,    // cyclic relaxed Douglas-Rachford
  kADMM1,   // nonsmooth ADMM on the indicator splitting
  kADMM2,   // primal-dual ADMM on the least-squares model
  kAVP,     // averaged projections (= AM = product-space AP = PG)
  kDYREPR,  // dynamically reweighted averaged projections
  kQNAVP,   // limited-memory BFGS with trust region on the squared distances
  kWF,      // Wirtinger flow
  kFPG,     // fast projected gradient in the product space
  kDRL,     // relaxed Douglas-Rachford (RAAR)
  kDRAP,    // Douglas-Rachford / alternating projections hybrid
};

std::span<const AlgorithmKind> all_algorithm_kinds() noexcept;
std::string_view to_string(AlgorithmKind kind) noexcept;
std::optional<AlgorithmKind> parse_algorithm_kind(std::string_view name) noexcept;

struct QuasiNewtonOptions {
  std::size_t memory = 8;          // stored curvature pairs
  double curvature_floor = 1e-10;  // pairs with s'y <= floor are rejected
  double ratio_threshold = 1e-4;   // trust-region acceptance ratio
  double armijo_slope = 1e-4;      // line search used while memory is empty
  double backtrack = 0.5;
  std::size_t max_radius_reductions = 60;

  friend bool operator==(const QuasiNewtonOptions&, const QuasiNewtonOptions&) = default;
};

/// Algorithm identifier plus every tunable parameter. Parameters that do not
/// apply to `kind` are ignored.
struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::kCP;
  double lambda = 0.5;            // CDRL, DRL, DRAP relaxation in [0, 1]
  double eta = 3.0;               // ADMM1 penalty
  std::vector<double> rho{0.5};   // ADMM2, one entry broadcasts to every set
  std::optional<double> mu;       // WF step; unset resolves to 0.1 n / m
  double c = 1e-8;                // DyRePr log offset
  QuasiNewtonOptions quasi_newton;
  std::size_t warm_start_iters = 0;
  bool admm1_scaled_dual = false;  // ADMM1 step 2 as P(x + v / eta)
  bool cdrl_inner_relax = false;   // CDRL last factor relaxes toward C_m instead of C_0

  /// Defaults used by the benchmark tables for `kind`.
  static AlgorithmSpec defaults(AlgorithmKind kind);
  /// Throws ConfigError naming the offending parameter.
  void validate() const;

  friend bool operator==(const AlgorithmSpec&, const AlgorithmSpec&) = default;
};

// ---------------------------------------------------------------------------
// Generic two-set building blocks. `A` and `B` are anything with free
// project/reflect overloads for `Z` (ConstraintSet, ProductSet).

template <class S, class Z>
concept ProjectsOnto = requires(const S& set, const Z& z) {
  { project(set, z) } -> std::same_as<Z>;
  { reflect(set, z) } -> std::same_as<Z>;
};

/// 1/2 (R_outer R_inner + Id) z
template <class Z, ProjectsOnto<Z> Outer, ProjectsOnto<Z> Inner>
Z dr_step(const Outer& outer, const Inner& inner, const Z& z) {
  Z next = reflect(outer, reflect(inner, z));
  next += z;
  next *= 0.5;
  return next;
}

/// lambda/2 (R_outer R_inner + Id) z + (1 - lambda) P_inner z
template <class Z, ProjectsOnto<Z> Outer, ProjectsOnto<Z> Inner>
Z drl_pair_step(const Outer& outer, const Inner& inner, double lambda, const Z& z) {
  const Z inner_proj = project(inner, z);
  Z inner_refl = inner_proj;
  inner_refl *= 2.0;
  inner_refl -= z;
  Z next = reflect(outer, inner_refl);
  next += z;
  next *= 0.5 * lambda;
  Z relax = inner_proj;
  relax *= 1.0 - lambda;
  next += relax;
  return next;
}

// ---------------------------------------------------------------------------
// Feasibility algorithms on a single signal.

/// P_{C_0} P_{C_1} ... P_{C_m} z, projecting onto C_m first.
Signal cp_step(const Problem& problem, const Signal& z);

/// prod_j 1/2 (R_{C_j} R_{C_{j+1}} + Id) over the cycle (C_0,C_1), ...,
/// (C_m,C_0); the rightmost factor (C_m,C_0) is applied first.
Signal cdr_step(const Problem& problem, const Signal& z);

/// Cyclic composition of drl_pair_step in the same order as cdr_step. With
/// `inner_relax` the last-applied factor relaxes toward C_m instead of C_0.
Signal cdrl_step(const Problem& problem, double lambda, const Signal& z, bool inner_relax = false);

/// (1/(m+1)) sum_j P_{C_j} z
Signal avp_step(const Problem& problem, const Signal& z);

/// z - sum_j 2 / (dist^2(z, C_j) + c) (z - P_{C_j} z)
Signal dyrepr_step(const Problem& problem, double c, const Signal& z);

struct Admm1State {
  Signal x;
  std::vector<Signal> z;  // one per data set
  std::vector<Signal> v;  // multipliers, one per data set
  friend bool operator==(const Admm1State&, const Admm1State&) = default;
};

/// x = z_j = z0, v_j = 0.
Admm1State admm1_init(const Problem& problem, const Signal& z0);
/// One pass of the x-update, the parallel z_j-updates and the multiplier
/// updates. Without a qualitative set, P_{C_0} is the identity.
Admm1State admm1_step(const Problem& problem, double eta, const Admm1State& state,
                      bool scaled_dual = false);

struct Admm2State {
  Signal z;
  Signal z_prev;
  std::vector<Signal> u;  // one per data set
  friend bool operator==(const Admm2State&, const Admm2State&) = default;
};

/// u_j = P_{C_j}(z0) for every set, z^1 = average of all u_j, z^0 = z0.
Admm2State admm2_init(const Problem& problem, const Signal& z0);
/// z^{k+1} = (1/m) sum_j (u_j + (z^k - z^{k-1}) / rho_j)
/// u_j^{k+1} = P_{C_j}(u_j + (2 z^k - z^{k-1}) / rho_j)
/// over the data sets j. `rho` has one entry per data set or a single entry.
/// For sets behind an affine map A = L + t the extrapolated point is taken in
/// the measurement frame, i.e. L^* t / rho_j is added inside the projection.
Admm2State admm2_step(const Problem& problem, std::span<const double> rho, const Admm2State& state);

// ---------------------------------------------------------------------------
// Smooth objectives.

struct SmoothValue {
  double value = 0.0;
  Signal gradient;
};

/// f(z) = 1/(2(m+1)) sum_j dist^2(z, C_j), grad f = 1/(m+1) sum_j (z - P_{C_j} z).
SmoothValue squared_distance_objective(const Problem& problem, const Signal& z);

/// G(z) = 1/2 sum_j sum_i (|| (F P_j z)_i ||^2 - b_ij^2)^2 over the amplitude sets,
/// grad G = 2 sum_j (F P_j)^* [ (|| (F P_j z)_i ||^2 - b_ij^2) (F P_j z)_i ].
SmoothValue squared_amplitude_objective(const Problem& problem, const Signal& z);

struct CurvaturePair {
  Signal s;
  Signal y;
  friend bool operator==(const CurvaturePair&, const CurvaturePair&) = default;
};

struct QuasiNewtonState {
  Signal z;
  double value = 0.0;
  Signal gradient;
  std::deque<CurvaturePair> pairs;  // oldest first
  double scaling = 1.0;             // initial Hessian approximation scaling * Id
  double radius = std::numeric_limits<double>::infinity();
  friend bool operator==(const QuasiNewtonState&, const QuasiNewtonState&) = default;
};

QuasiNewtonState qnavp_init(const Problem& problem, const Signal& z0);
/// One outer iteration: an Armijo line search while memory is empty, else the
/// L-BFGS step under a dogleg trust region; then the curvature-guarded pair
/// update. Throws NumericError when the trust region cannot produce a step.
QuasiNewtonState qnavp_step(const Problem& problem, const QuasiNewtonOptions& options,
                            const QuasiNewtonState& state);

/// Applies the L-BFGS inverse-Hessian approximation (two-loop recursion).
Signal lbfgs_apply_inverse(const std::deque<CurvaturePair>& pairs, double scaling, const Signal& v);
/// Applies the L-BFGS Hessian approximation (compact representation).
Signal lbfgs_apply(const std::deque<CurvaturePair>& pairs, double scaling, const Signal& v);
/// Curvature-guarded memory update shared by qnavp_step; exposed for tests.
void update_curvature_memory(QuasiNewtonState& state, CurvaturePair pair,
                             const QuasiNewtonOptions& options);

/// Power iterations on z -> (1/(n m)) sum_j (F P_j)^* [ b_j^2 (F P_j z) ] from
/// `start`, returning the normalized leading eigenvector scaled so that
/// || F P_1 z || = || b_1 ||.
Signal wf_warm_start(const Problem& problem, std::size_t iters, const Signal& start);
/// Same, from a seeded standard Gaussian start.
Signal wf_warm_start(const Problem& problem, std::size_t iters, std::uint64_t seed);
/// z - mu / ||z0||^2 grad G(z)
Signal wf_step(const Problem& problem, double mu, double z0_norm_sq, const Signal& z);
/// Default WF step 0.1 n / m (m amplitude sets).
double wf_default_mu(const Problem& problem);

// ---------------------------------------------------------------------------
// Product-space algorithms. The iterate has one factor per set.

struct FpgState {
  ProductSignal z;  // z^k (latest)
  ProductSignal y;  // y^{k+1}
  std::size_t k = 1;
  friend bool operator==(const FpgState&, const FpgState&) = default;
};

/// z^0 = y^1 = (z0, ..., z0), k = 1.
FpgState fpg_init(const Problem& problem, const Signal& z0);
/// z^k = P_C P_D y^k; y^{k+1} = z^k + (k-1)/(k+2) (z^k - z^{k-1}).
FpgState fpg_step(const Problem& problem, const FpgState& state);

/// lambda/2 (R_D R_C Z + Z) + (1 - lambda) P_C Z
ProductSignal drl_product_step(const Problem& problem, double lambda, const ProductSignal& z);

/// P_D((1 + lambda) P_C Z - lambda Z) - lambda (P_C Z - Z)
ProductSignal drap_step(const Problem& problem, double lambda, const ProductSignal& z);

}  // namespace proxbench
