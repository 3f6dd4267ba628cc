#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

namespace proxbench::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// Runs `body`, mapping ConfigError to kExitConfig and every other exception
/// to kExitRuntime; the message goes to `err`.
int guarded(const std::function<int()>& body, std::ostream& err);

/// PROXBENCH_SEED, if set. Throws ConfigError when it is not an unsigned integer.
std::optional<std::uint64_t> env_seed();

struct BenchOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;  // overrides PROXBENCH_SEED and base_seed
  bool print_config = false;
};

int cmd_bench(const BenchOptions& options, std::ostream& out);

struct RunOptions {
  std::string problem;
  std::string algorithm;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> trace;
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
  std::optional<double> lambda;
  bool warm_start = false;
};

int cmd_run(const RunOptions& options, std::ostream& out);

struct DatasetGenOptions {
  std::string problem;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out;
};

int cmd_dataset_gen(const DatasetGenOptions& options, std::ostream& out);
int cmd_dataset_inspect(const std::filesystem::path& path, std::ostream& out);

}  // namespace proxbench::cli
