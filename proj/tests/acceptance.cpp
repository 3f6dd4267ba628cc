// Acceptance run: one PASS/FAIL line per property, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <proxbench/algorithms.hpp>
#include <proxbench/bench.hpp>
#include <proxbench/constraint_set.hpp>
#include <proxbench/dataset.hpp>
#include <proxbench/instances.hpp>
#include <proxbench/metrics.hpp>
#include <proxbench/problem.hpp>
#include <proxbench/run.hpp>
#include <proxbench/success.hpp>

using namespace proxbench;

namespace {

constexpr std::uint64_t kBaseSeed = 1;

// Pinned tolerances and sizes.
constexpr double kIdempotenceTol = 1e-12;
constexpr double kOracleSlack = 1e-12;
constexpr std::size_t kOracleInputs = 100;
constexpr std::size_t kOracleSamples = 10000;
constexpr double kEquivalenceTol = 1e-10;
constexpr double kGradientTol = 1e-5;
constexpr double kFiniteDifferenceStep = 1e-6;
constexpr double kSparseDotsMaxGap = 5e-4;
constexpr Termination kCdp1DTermination{1e-10, 6000};
constexpr Termination kCdp2DTermination{1e-8, 6000};
constexpr Termination kSparseDotsTermination{1e-10, 6000};
constexpr Termination kSrclocTermination{1e-11, 10000};
constexpr Termination kToyTermination{1e-11, 10000};

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Check {
  std::string name;
  double budget_seconds;
  std::function<Outcome()> body;
};

AlgorithmEntry entry(const std::string& label, AlgorithmKind kind, double lambda = -1.0) {
  AlgorithmSpec spec = AlgorithmSpec::defaults(kind);
  if (lambda >= 0.0) spec.lambda = lambda;
  return {label, spec};
}

const SummaryRow& row(const BenchmarkSummary& s, const std::string& label) {
  for (const auto& r : s.rows) {
    if (r.algorithm == label) return r;
  }
  throw std::logic_error("no row " + label);
}

std::string describe(const SummaryRow& r) {
  std::ostringstream os;
  os << r.algorithm << " failures " << r.failures << "/" << r.trials << " median "
     << (r.median.sentinel ? "*" : format_number(r.median.value));
  return os.str();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Projectors against sampled members.

using Sampler = std::function<Signal(std::mt19937_64&)>;

Signal gaussian(const Shape& shape, std::mt19937_64& rng, double sigma = 1.0) {
  std::normal_distribution<double> normal(0.0, sigma);
  Signal z(shape, 2);
  for (double& v : z.values()) v = normal(rng);
  return z;
}

Signal unit_mask(const Shape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  Signal m(shape, 2);
  for (std::size_t i = 0; i < m.num_blocks(); ++i) {
    const double t = phase(rng);
    m(i, 0) = std::cos(t);
    m(i, 1) = std::sin(t);
  }
  return m;
}

/// Members with exactly `s` nonzero blocks at random positions.
Sampler sparse_sampler(const Shape& shape, std::size_t s, bool nonneg_real) {
  return [=](std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.5);
    std::vector<std::size_t> idx(shape.num_blocks());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    Signal z(shape, 2);
    for (std::size_t k = 0; k < s; ++k) {
      z(idx[k], 0) = nonneg_real ? std::abs(normal(rng)) : normal(rng);
      z(idx[k], 1) = nonneg_real ? 0.0 : normal(rng);
    }
    return z;
  };
}

Sampler support_sampler(const Shape& shape, std::vector<std::uint8_t> support, SupportMode mode) {
  return [=](std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.5);
    Signal z(shape, 2);
    for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
      if (!support.empty() && !support[i]) continue;
      const double a = normal(rng);
      z(i, 0) = mode == SupportMode::kRealNonnegative ? std::abs(a) : a;
      z(i, 1) = mode == SupportMode::kSupportOnly ? normal(rng) : 0.0;
    }
    return z;
  };
}

Outcome projector_oracles() {
  const Shape shape{3};
  const std::vector<std::uint8_t> support{1, 0, 1};
  const MeasurementMap fourier(Transform::kDft1D, PointwiseMask{unit_mask(shape, 11)});
  const MeasurementMap shift(Transform::kIdentity, Translate{{0.5, -1.0}});
  const std::vector<double> radii{0.7, 1.3, 0.4};

  struct Case {
    std::string name;
    ConstraintSet set;
    Sampler member;
  };
  const Sampler amplitude_member = [&](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    Signal y(shape, 2);
    for (std::size_t i = 0; i < 3; ++i) {
      const double t = phase(rng);
      y(i, 0) = radii[i] * std::cos(t);
      y(i, 1) = radii[i] * std::sin(t);
    }
    return apply_adjoint(fourier, y);
  };
  const Sampler cone_member = support_sampler(shape, support, SupportMode::kRealNonnegative);
  const Sampler sparse_member = sparse_sampler(shape, 2, false);
  std::vector<Case> cases{
      {"amplitude", ConstraintSet::amplitude(fourier, radii), amplitude_member},
      {"nonnegative real on support", ConstraintSet::nonneg_real_support(support), cone_member},
      {"real on support", ConstraintSet::nonneg_real_support(support, SupportMode::kReal),
       support_sampler(shape, support, SupportMode::kReal)},
      {"support only", ConstraintSet::nonneg_real_support(support, SupportMode::kSupportOnly),
       support_sampler(shape, support, SupportMode::kSupportOnly)},
      {"sparsity", ConstraintSet::sparsity(2), sparse_member},
      {"sparse nonnegative cone", ConstraintSet::sparse_nonneg_cone(2), sparse_sampler(shape, 2, true)},
      {"preimage of cone under masked DFT",
       ConstraintSet::preimage(fourier, ConstraintSet::nonneg_real_support(support)),
       [&](std::mt19937_64& rng) { return apply_adjoint(fourier, cone_member(rng)); }},
      {"preimage of sparsity under translation", ConstraintSet::preimage(shift, ConstraintSet::sparsity(2)),
       [&](std::mt19937_64& rng) { return apply_adjoint(shift, sparse_member(rng)); }},
  };

  std::mt19937_64 rng(kBaseSeed);
  double worst_idem = 0.0, worst_gap = -1e300;
  std::string worst_name;
  for (const auto& c : cases) {
    std::vector<Signal> members;
    members.reserve(kOracleSamples);
    for (std::size_t k = 0; k < kOracleSamples; ++k) members.push_back(c.member(rng));
    for (std::size_t t = 0; t < kOracleInputs; ++t) {
      const Signal z = gaussian(shape, rng);
      const Signal p = project(c.set, z);
      worst_idem = std::max(worst_idem, iterate_change(project(c.set, p), p) / std::max(1.0, norm(p)));
      const double d = iterate_change(z, p);
      double best = 1e300;
      for (const auto& m : members) best = std::min(best, iterate_change(z, m));
      if (d - best > worst_gap) {
        worst_gap = d - best;
        worst_name = c.name;
      }
    }
  }

  // Diagonal in the product space with three copies.
  const ConstraintSet diag = ConstraintSet::diagonal(3);
  std::vector<Signal> members;
  for (std::size_t k = 0; k < kOracleSamples; ++k) members.push_back(gaussian(shape, rng));
  for (std::size_t t = 0; t < kOracleInputs; ++t) {
    const ProductSignal z({gaussian(shape, rng), gaussian(shape, rng), gaussian(shape, rng)});
    const ProductSignal p = project(diag, z);
    worst_idem = std::max(worst_idem, iterate_change(project(diag, p), p) / std::max(1.0, norm(p[0])));
    const double d = iterate_change(z, p);
    double best = 1e300;
    for (const auto& m : members) best = std::min(best, iterate_change(z, ProductSignal::replicate(m, 3)));
    if (d - best > worst_gap) {
      worst_gap = d - best;
      worst_name = "diagonal";
    }
  }

  return {worst_idem <= kIdempotenceTol && worst_gap <= kOracleSlack,
          "9 set variants x " + std::to_string(kOracleInputs) + " inputs, worst idempotence " + sci(worst_idem) +
              ", worst excess over nearest sample " + sci(worst_gap) + " (" + worst_name + ")"};
}

// ---------------------------------------------------------------------------
// AvP against independent realizations of AM, product-space AP and PG.

Signal alternating_minimization(const Problem& problem, const Signal& z) {
  std::vector<Signal> x;
  for (const auto& set : problem.sets()) x.push_back(project(set, z));
  Signal out(z.shape(), z.block_dim());
  for (const auto& xj : x) out += xj;
  return (1.0 / static_cast<double>(x.size())) * out;
}

Signal product_alternating_projections(const Problem& problem, const Signal& z) {
  const ProductSignal lifted = ProductSignal::replicate(z, problem.num_sets());
  return project(problem.diagonal(), project(problem.product_set(), lifted))[0];
}

Signal projected_gradient(const Problem& problem, const Signal& z) {
  return z - squared_distance_objective(problem, z).gradient;
}

double blockwise_gap(const Signal& a, const Signal& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) worst = std::max(worst, std::abs(a.values()[k] - b.values()[k]));
  return worst;
}

Outcome averaged_projection_equivalence() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Instance inst = gen_cdp(Shape{64}, 3, kBaseSeed + s);
    Signal avp = random_start(inst, start_seed(kBaseSeed, s));
    Signal am = avp, ap = avp, pg = avp;
    for (int k = 0; k < 50; ++k) {
      avp = avp_step(inst.problem, avp);
      am = alternating_minimization(inst.problem, am);
      ap = product_alternating_projections(inst.problem, ap);
      pg = projected_gradient(inst.problem, pg);
      worst = std::max({worst, blockwise_gap(avp, am), blockwise_gap(avp, ap), blockwise_gap(avp, pg)});
    }
  }
  return {worst <= kEquivalenceTol, "10 seeds x 50 iterations on 3-set CDP n=64, largest entry gap " + sci(worst)};
}

// ---------------------------------------------------------------------------
// Gradients against central differences.

double gradient_error(const std::function<SmoothValue(const Signal&)>& f, const Signal& z) {
  const Signal g = f(z).gradient;
  Signal fd(z.shape(), z.block_dim());
  for (std::size_t k = 0; k < z.values().size(); ++k) {
    const double h = kFiniteDifferenceStep * std::max(1.0, std::abs(z.values()[k]));
    Signal up = z, down = z;
    up.values()[k] += h;
    down.values()[k] -= h;
    fd.values()[k] = (f(up).value - f(down).value) / (2.0 * h);
  }
  return iterate_change(g, fd) / norm(g);
}

Outcome gradient_checks() {
  const Instance inst = gen_cdp(Shape{16}, 3, kBaseSeed);
  double worst_f = 0.0, worst_g = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Signal z = random_start(inst, start_seed(kBaseSeed, s));
    worst_f = std::max(worst_f, gradient_error([&](const Signal& x) { return squared_distance_objective(inst.problem, x); }, z));
    worst_g = std::max(worst_g, gradient_error([&](const Signal& x) { return squared_amplitude_objective(inst.problem, x); }, z));
  }
  return {worst_f < kGradientTol && worst_g < kGradientTol,
          "20 points n=16, relative error squared-distance " + sci(worst_f) + ", squared-amplitude " + sci(worst_g)};
}

// ---------------------------------------------------------------------------
// Campaigns.

CampaignResult campaign(std::function<Instance(std::uint64_t)> make, std::vector<AlgorithmEntry> algos,
                        Termination term, std::size_t trials, std::size_t workers = 1) {
  CampaignConfig c;
  c.make_instance = std::move(make);
  c.algorithms = std::move(algos);
  c.termination = term;
  c.trials = trials;
  c.base_seed = kBaseSeed;
  c.workers = workers;
  return run_campaign(c);
}

Outcome source_localization_noiseless() {
  const auto r = campaign([](std::uint64_t s) { return gen_srcloc(10, false, s); },
                          {entry("CP", AlgorithmKind::kCP), entry("CDR", AlgorithmKind::kCDR),
                           entry("CDRL", AlgorithmKind::kCDRL, 0.33)},
                          kSrclocTermination, 100);
  bool pass = true;
  std::string detail;
  for (const char* label : {"CP", "CDR", "CDRL"}) {
    const SummaryRow& x = row(r.summary, label);
    pass = pass && x.failures == 0 && !x.median.sentinel && x.median.value <= 60.0;
    detail += (detail.empty() ? "" : "; ") + describe(x);
  }
  return {pass, "100 trials, need 0 failures and median <= 60: " + detail};
}

Outcome cdp_1d_cold_start() {
  const auto r = campaign([](std::uint64_t s) { return gen_cdp(Shape{128}, 10, s); },
                          {entry("CDRL", AlgorithmKind::kCDRL, 0.33), entry("CP", AlgorithmKind::kCP),
                           entry("AVP", AlgorithmKind::kAVP)},
                          kCdp1DTermination, 100);
  const SummaryRow& cdrl = row(r.summary, "CDRL");
  const SummaryRow& cp = row(r.summary, "CP");
  const SummaryRow& avp = row(r.summary, "AVP");
  const bool pass = cdrl.failures == 0 && !cdrl.median.sentinel && cdrl.median.value <= 25.0 &&
                    cdrl.median.value < cp.median.value && cp.median.value < avp.median.value;
  return {pass, "n=128 m=10, 100 trials, need CDRL 0 failures, median <= 25 and CDRL < CP < AVP medians: " +
                    describe(cdrl) + "; " + describe(cp) + "; " + describe(avp)};
}

Outcome cdp_2d_douglas_rachford() {
  const auto r = campaign([](std::uint64_t s) { return gen_cdp(Shape{64, 64}, 10, s); },
                          {entry("DR", AlgorithmKind::kDR), entry("DRL", AlgorithmKind::kDRL, 0.75)},
                          kCdp2DTermination, 20);
  const SummaryRow& dr = row(r.summary, "DR");
  const SummaryRow& drl = row(r.summary, "DRL");
  return {dr.failures >= 18 && drl.failures == 0,
          "64x64 m=10, 20 trials, need DR >= 90% failures and DRL(0.75) none: " + describe(dr) + "; " +
              describe(drl)};
}

Outcome disjoint_circles() {
  const Instance inst = toy_disjoint_circles();
  const Signal z0 = random_start(inst, start_seed(kBaseSeed, 0));
  const RunResult dr = run(AlgorithmSpec::defaults(AlgorithmKind::kDR), inst.problem, z0, kToyTermination);
  AlgorithmSpec drl = AlgorithmSpec::defaults(AlgorithmKind::kDRL);
  drl.lambda = 0.5;
  const RunResult relaxed = run(drl, inst.problem, z0, kToyTermination);
  const RunResult avp = run(AlgorithmSpec::defaults(AlgorithmKind::kAVP), inst.problem, z0, kToyTermination);
  const bool pass = !dr.converged && dr.iterations == kToyTermination.max_iter && relaxed.converged &&
                    relaxed.final_change < kToyTermination.tol && avp.converged &&
                    avp.final_change < kToyTermination.tol;
  return {pass, "DR last change " + sci(dr.final_change) + " after " + std::to_string(dr.iterations) +
                    " iterations; DRL(0.5) " + sci(relaxed.final_change) + " at " +
                    std::to_string(relaxed.iterations) + "; AVP " + sci(avp.final_change) + " at " +
                    std::to_string(avp.iterations)};
}

Outcome sparse_dots() {
  const auto r = campaign([](std::uint64_t s) { return gen_sparse_dots(SparseDotsParams{}, s); },
                          {entry("CP", AlgorithmKind::kCP), entry("CDRL", AlgorithmKind::kCDRL, 0.33),
                           entry("DRAP", AlgorithmKind::kDRAP, 0.55)},
                          kSparseDotsTermination, 50);
  bool pass = true;
  std::string detail;
  for (const char* label : {"CP", "CDRL", "DRAP"}) {
    std::size_t wins = 0, violations = 0;
    for (const auto& rec : r.records) {
      if (rec.algorithm != label) continue;
      wins += rec.success;
      violations += rec.success && rec.final_gap > kSparseDotsMaxGap;
    }
    pass = pass && wins >= 40 && violations == 0;
    detail += std::string(detail.empty() ? "" : "; ") + label + " success " + std::to_string(wins) +
              "/50, gap violations " + std::to_string(violations);
  }
  return {pass, "3 dots on 64x64, need >= 80% success each: " + detail};
}

Outcome determinism() {
  const auto make = [](std::uint64_t s) { return gen_cdp(Shape{32}, 4, s); };
  const std::vector<AlgorithmEntry> algos{entry("CP", AlgorithmKind::kCP), entry("CDRL", AlgorithmKind::kCDRL, 0.33),
                                          entry("DRAP", AlgorithmKind::kDRAP, 0.55), entry("WF", AlgorithmKind::kWF),
                                          entry("QNAVP", AlgorithmKind::kQNAVP)};
  const Termination term{1e-10, 2000};
  const auto a = campaign(make, algos, term, 8, 1);
  const auto b = campaign(make, algos, term, 8, 1);
  const auto c = campaign(make, algos, term, 8, 4);
  bool same = true;
  for (auto fmt : {TableFormat::kCsv, TableFormat::kJson}) {
    same = same && emit_table(a.summary, fmt) == emit_table(b.summary, fmt) &&
           emit_table(a.summary, fmt) == emit_table(c.summary, fmt);
  }
  same = same && emit_records(a.records) == emit_records(c.records) && a.records == c.records;
  return {same, "CDP n=32, 5 algorithms x 8 trials, tables and records byte-identical for 1, 1 and 4 workers"};
}

Outcome dataset_and_rotation_monitor() {
  bool pass = true;
  std::string detail;
  for (const Instance& inst : {gen_cdp(Shape{16, 16}, 3, kBaseSeed), gen_sparse_dots(SparseDotsParams{}, kBaseSeed),
                               gen_srcloc(10, true, kBaseSeed)}) {
    const auto bytes = encode_dataset(inst);
    const bool ok = decode_dataset(bytes) == inst && encode_dataset(decode_dataset(bytes)) == bytes;
    pass = pass && ok;
  }
  detail = std::string("dataset round-trip ") + (pass ? "exact" : "MISMATCH");

  // z_k = exp(i k theta) z: constant plain change, zero phase-aligned change.
  const Instance inst = gen_cdp(Shape{64}, 3, kBaseSeed);
  const Signal z = *inst.truth;
  const double theta = 0.3;
  Signal prev = z;
  double plain = 1e300, aligned = 0.0;
  for (int k = 1; k <= 20; ++k) {
    Signal next(z.shape(), 2);
    for (std::size_t i = 0; i < z.num_blocks(); ++i) {
      next(i, 0) = std::cos(k * theta) * z(i, 0) - std::sin(k * theta) * z(i, 1);
      next(i, 1) = std::sin(k * theta) * z(i, 0) + std::cos(k * theta) * z(i, 1);
    }
    plain = std::min(plain, termination_change(prev, next, false));
    aligned = std::max(aligned, termination_change(prev, next, true));
    prev = next;
  }
  const double tol = kCdp1DTermination.tol;
  pass = pass && plain > tol && aligned < tol;
  detail += "; rotating sequence plain change >= " + sci(plain) + ", phase-aligned change <= " + sci(aligned);
  return {pass, detail};
}

}  // namespace

int main() {
  const std::vector<Check> checks{
      {"projectors match sampled nearest points", 10, projector_oracles},
      {"AvP equals AM, product-space AP and PG", 30, averaged_projection_equivalence},
      {"smooth objective gradients match central differences", 10, gradient_checks},
      {"noiseless source localization with 10 sensors", 60, source_localization_noiseless},
      {"1-D CDP cold start ordering", 600, cdp_1d_cold_start},
      {"2-D CDP: DR fails, DRL(0.75) succeeds", 900, cdp_2d_douglas_rachford},
      {"disjoint circles: DR has no fixed point", 5, disjoint_circles},
      {"sparse dots recovery", 1200, sparse_dots},
      {"campaign output is deterministic", 60, determinism},
      {"dataset round-trip and rotation-aware termination", 60, dataset_and_rotation_monitor},
  };

  std::size_t failed = 0;
  for (const auto& check : checks) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = check.body();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < check.budget_seconds;
    const bool pass = out.pass && in_time;
    failed += !pass;
    std::printf("%s  %s: %s [%.1f s, limit %.0f s%s]\n", pass ? "PASS" : "FAIL", check.name.c_str(),
                out.detail.c_str(), secs, check.budget_seconds, in_time ? "" : ", over time");
    std::fflush(stdout);
  }
  std::printf("%zu of %zu checks passed\n", checks.size() - failed, checks.size());
  return failed == 0 ? 0 : 1;
}
