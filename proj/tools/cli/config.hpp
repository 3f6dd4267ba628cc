#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <proxbench/bench.hpp>
#include <proxbench/instances.hpp>
#include <proxbench/run.hpp>
#include <proxbench/success.hpp>

namespace proxbench::cli {

enum class ToyKind { kTwoLines, kCircleLine, kDisjointCircles };

struct ProblemConfig {
  Family family = Family::kCdp1D;
  std::vector<std::size_t> dims{128};  // n for cdp1d, rows/cols for grids
  std::size_t m = 10;                   // masks or sensors
  MaskAlphabet masks = MaskAlphabet::kUniform;
  bool noise = false;
  SparseDotsParams dots;
  std::string path;  // dataset file, absolute after loading
  ToyKind toy = ToyKind::kTwoLines;
  double angle = 0.5;

  friend bool operator==(const ProblemConfig&, const ProblemConfig&) = default;
};

enum class OutputFormat { kCsv, kJson, kBoth };

struct OutputConfig {
  std::string dir = "out";
  OutputFormat format = OutputFormat::kBoth;
  bool records = true;
  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct Flags {
  bool trace = false;
  bool stats_exclude_failures = false;
  bool admm1_scaled_dual = false;
  bool cdrl_inner_relax = false;
  bool phase_rotation_termination = false;
  friend bool operator==(const Flags&, const Flags&) = default;
};

struct Config {
  ProblemConfig problem;
  std::vector<AlgorithmEntry> algorithms;
  Termination termination;
  std::optional<SuccessCriteria> success;  // unset: family default
  std::size_t trials = 1;
  std::uint64_t base_seed = 0;
  std::size_t workers = 0;  // 0: hardware concurrency
  Flags flags;
  OutputConfig output;

  friend bool operator==(const Config&, const Config&) = default;
};

/// Power iterations used when an entry asks for "warm_start": true.
inline constexpr std::size_t kDefaultWarmStartIters = 50;

/// Parses and validates a config document. Relative dataset paths resolve
/// against `base_dir`. Throws ConfigError with a dotted field path, or with
/// "line L, column C" for malformed JSON.
Config parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
Config load_config(const std::filesystem::path& path);

/// Fully resolved config; parse_config(dump_config(c)) == c.
std::string dump_config(const Config& config);

Instance make_instance(const ProblemConfig& problem, std::uint64_t seed);
CampaignConfig to_campaign(const Config& config);

/// Named problems for `run` and `dataset gen`: cdp1d, cdp2d, sparse_dots,
/// srcloc3, srcloc3_noisy, srcloc10, srcloc10_noisy, two_lines, circle_line,
/// disjoint_circles, or file:<path>.
ProblemConfig named_problem(const std::string& name);
std::vector<std::string> problem_names();

/// Tolerance and iteration cap used by the benchmark tables for the family.
Termination default_termination(const ProblemConfig& problem);

}  // namespace proxbench::cli
