#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include <proxbench/bench.hpp>
#include <proxbench/dataset.hpp>
#include <proxbench/error.hpp>

#include "config.hpp"

namespace proxbench::cli {
namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (auto env = env_seed()) return *env;
  return fallback;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

}  // namespace

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("PROXBENCH_SEED");
  if (!raw || !*raw) return std::nullopt;
  const std::string text(raw);
  if (text.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("PROXBENCH_SEED", "expected an unsigned integer, got \"" + text + "\"");
  }
  try {
    return std::stoull(text);
  } catch (const std::out_of_range&) {
    throw ConfigError("PROXBENCH_SEED", "out of range");
  }
}

int cmd_bench(const BenchOptions& options, std::ostream& out) {
  Config config = load_config(options.config);
  config.base_seed = resolve_seed(options.seed, config.base_seed);
  if (options.workers) {
    if (*options.workers < 1) throw ConfigError("workers", "must be at least 1");
    config.workers = *options.workers;
  }
  if (options.out_dir) config.output.dir = options.out_dir->string();
  if (options.print_config) {
    out << dump_config(config);
    return kExitOk;
  }

  const CampaignResult result = run_campaign(to_campaign(config));
  const fs::path dir(config.output.dir);
  const std::string csv = emit_table(result.summary, TableFormat::kCsv);
  if (config.output.format != OutputFormat::kJson) write_file(dir / "summary.csv", csv);
  if (config.output.format != OutputFormat::kCsv) {
    write_file(dir / "summary.json", emit_table(result.summary, TableFormat::kJson));
  }
  if (config.output.records) write_file(dir / "records.csv", emit_records(result.records));
  if (config.flags.trace) {
    for (const auto& r : result.records) {
      write_file(dir / "traces" / (r.algorithm + "_" + std::to_string(r.trial) + ".csv"), emit_trace(r));
    }
  }
  out << csv;
  return kExitOk;
}

int cmd_run(const RunOptions& options, std::ostream& out) {
  const ProblemConfig problem = named_problem(options.problem);
  const auto kind = parse_algorithm_kind(options.algorithm);
  if (!kind) {
    std::string valid;
    for (auto k : all_algorithm_kinds()) valid += (valid.empty() ? "" : ", ") + std::string(to_string(k));
    throw ConfigError("algo", "unknown algorithm \"" + options.algorithm + "\"; expected one of " + valid);
  }
  AlgorithmSpec spec = AlgorithmSpec::defaults(*kind);
  if (options.lambda) spec.lambda = *options.lambda;
  if (options.warm_start) spec.warm_start_iters = kDefaultWarmStartIters;
  spec.validate();

  Termination term = default_termination(problem);
  if (options.tol) term.tol = *options.tol;
  if (options.max_iter) term.max_iter = *options.max_iter;
  term.trace = options.trace.has_value();

  const std::uint64_t seed = resolve_seed(options.seed, 0);
  const Instance instance = make_instance(problem, seed);
  // Same start as trial 0 of a campaign with base_seed = seed.
  const Signal z0 = random_start(instance, start_seed(seed, 0));
  const RunResult result = run(spec, instance.problem, z0, term);

  nlohmann::ordered_json j;
  j["problem"] = options.problem;
  j["algorithm"] = std::string(to_string(*kind));
  j["seed"] = seed;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["diverged"] = result.diverged;
  j["final_change"] = result.final_change;
  j["final_gap"] = result.final_gap;
  if (instance.truth && result.estimate.all_finite()) {
    j["truth_distance"] = truth_distance(instance, result.estimate);
    j["success"] = success(instance, result.estimate, default_success_criteria(instance));
  } else {
    j["truth_distance"] = nullptr;
    j["success"] = instance.truth ? nlohmann::ordered_json(false) : nlohmann::ordered_json(nullptr);
  }

  if (options.trace) {
    TrialRecord record;
    record.trace = result.trace;
    write_file(*options.trace, emit_trace(record));
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_dataset_gen(const DatasetGenOptions& options, std::ostream& out) {
  const ProblemConfig problem = named_problem(options.problem);
  if (problem.family == Family::kFile) throw ConfigError("problem", "dataset gen needs a generator, not a file");
  const std::uint64_t seed = resolve_seed(options.seed, 0);
  const Instance instance = make_instance(problem, seed);
  const auto bytes = encode_dataset(instance);
  if (options.out.has_parent_path()) fs::create_directories(options.out.parent_path());
  save_dataset(instance, options.out);
  out << options.out.string() << " " << hex64(fnv1a64(bytes)) << "\n";
  return kExitOk;
}

int cmd_dataset_inspect(const fs::path& path, std::ostream& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const DatasetHeader h = inspect_dataset(bytes);
  nlohmann::ordered_json j;
  j["version"] = h.version;
  j["block_dim"] = h.block_dim;
  j["dims"] = h.dims;
  j["measurements"] = h.measurements;
  j["has_truth"] = h.has_truth;
  j["chunks"] = h.chunks;
  j["checksum"] = hex64(h.checksum);
  out << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace proxbench::cli
