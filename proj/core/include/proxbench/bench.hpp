#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "proxbench/algorithms.hpp"
#include "proxbench/instances.hpp"
#include "proxbench/run.hpp"
#include "proxbench/success.hpp"

namespace proxbench {

struct AlgorithmEntry {
  std::string label;  // row name in the table, e.g. "CDRL" or "WF-warm"
  AlgorithmSpec spec;
  friend bool operator==(const AlgorithmEntry&, const AlgorithmEntry&) = default;
};

struct CampaignConfig {
  std::function<Instance(std::uint64_t seed)> make_instance;
  std::vector<AlgorithmEntry> algorithms;
  Termination termination;
  std::optional<SuccessCriteria> criteria;  // unset: family default
  std::size_t trials = 1;
  std::uint64_t base_seed = 0;
  std::size_t workers = 1;
  bool stats_exclude_failures = false;
};

struct TrialRecord {
  std::string algorithm;
  std::size_t trial = 0;
  std::uint64_t instance_seed = 0;
  std::size_t iterations = 0;
  bool converged = false;
  bool diverged = false;
  bool success = false;
  double final_gap = 0.0;
  double truth_distance = 0.0;  // NaN without truth
  std::optional<std::vector<TraceRow>> trace;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// One order statistic; `sentinel` marks a value taken from a run that hit
/// max_iter without converging (rendered as "*"). Sentinels compare equal
/// whatever their value, since the tables do not carry it.
struct Statistic {
  double value = 0.0;
  bool sentinel = false;
  friend bool operator==(const Statistic& a, const Statistic& b) {
    return a.sentinel == b.sentinel && (a.sentinel || a.value == b.value);
  }
};

struct SummaryRow {
  std::string algorithm;
  std::size_t trials = 0;
  std::size_t failures = 0;
  Statistic median;
  Statistic high;
  Statistic low;
  friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

struct BenchmarkSummary {
  std::vector<SummaryRow> rows;
  friend bool operator==(const BenchmarkSummary&, const BenchmarkSummary&) = default;
};

struct CampaignResult {
  BenchmarkSummary summary;
  std::vector<TrialRecord> records;  // trial-major, algorithms in config order
};

/// Seed of the start shared by every algorithm of trial `trial`.
std::uint64_t start_seed(std::uint64_t base_seed, std::size_t trial);

/// Runs every algorithm on `trials` instances (seed base_seed + t), all from
/// the same start per trial. Results do not depend on `workers`.
CampaignResult run_campaign(const CampaignConfig& config);

/// Per-algorithm failures and median/high/low iterations in first-seen order.
/// Non-converged runs count as max_iter. Throws std::invalid_argument on
/// empty input.
BenchmarkSummary summarize(const std::vector<TrialRecord>& records, std::size_t max_iter,
                           bool exclude_failures = false);

enum class TableFormat { kCsv, kJson };

std::string emit_table(const BenchmarkSummary& summary, TableFormat format);
/// Inverse of emit_table(.., kJson); throws FormatError.
BenchmarkSummary summary_from_json(const std::string& text);
/// CSV with columns iteration,iterate_change,gap; throws std::invalid_argument
/// when the record carries no trace.
std::string emit_trace(const TrialRecord& record);
/// One CSV line per trial record.
std::string emit_records(const std::vector<TrialRecord>& records);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

}  // namespace proxbench
