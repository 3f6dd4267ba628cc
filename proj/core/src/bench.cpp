#include "proxbench/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "proxbench/error.hpp"

namespace proxbench {
namespace {

std::vector<TrialRecord> run_trial(const CampaignConfig& config, std::size_t trial) {
  const std::uint64_t seed = config.base_seed + trial;
  const Instance instance = config.make_instance(seed);
  const Signal z0 = random_start(instance, start_seed(config.base_seed, trial));
  const SuccessCriteria criteria = config.criteria ? *config.criteria : default_success_criteria(instance);

  std::vector<TrialRecord> out;
  out.reserve(config.algorithms.size());
  for (const auto& entry : config.algorithms) {
    const RunResult result = run(entry.spec, instance.problem, z0, config.termination);
    TrialRecord record;
    record.algorithm = entry.label;
    record.trial = trial;
    record.instance_seed = seed;
    record.iterations = result.iterations;
    record.converged = result.converged;
    record.diverged = result.diverged;
    record.final_gap = result.final_gap;
    if (instance.truth) {
      record.truth_distance = result.estimate.all_finite() ? truth_distance(instance, result.estimate)
                                                           : std::numeric_limits<double>::infinity();
      record.success = success(instance, result.estimate, criteria);
    } else {
      record.truth_distance = std::numeric_limits<double>::quiet_NaN();
      record.success = result.converged;
    }
    if (config.termination.trace) record.trace = result.trace;
    out.push_back(std::move(record));
  }
  return out;
}

Statistic order_statistic(const std::vector<Statistic>& sorted, double rank) {
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = static_cast<std::size_t>(std::ceil(rank));
  if (lo == hi) return sorted[lo];
  return {0.5 * (sorted[lo].value + sorted[hi].value), sorted[lo].sentinel || sorted[hi].sentinel};
}

nlohmann::json statistic_to_json(const Statistic& s) {
  if (s.sentinel) return "*";
  return s.value;
}

Statistic statistic_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "*") throw FormatError("statistic must be a number or \"*\"");
    return {0.0, true};
  }
  if (!j.is_number()) throw FormatError("statistic must be a number or \"*\"");
  return {j.get<double>(), false};
}

std::string render(const Statistic& s) { return s.sentinel ? "*" : format_number(s.value); }

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::uint64_t start_seed(std::uint64_t base_seed, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32), 0x7a30u};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

CampaignResult run_campaign(const CampaignConfig& config) {
  if (!config.make_instance) throw ConfigError("problem", "no instance generator");
  if (config.algorithms.empty()) throw ConfigError("algorithms", "at least one algorithm is required");
  if (config.trials < 1) throw ConfigError("trials", "must be at least 1");
  for (std::size_t i = 0; i < config.algorithms.size(); ++i) {
    try {
      config.algorithms[i].spec.validate();
    } catch (const ConfigError& e) {
      throw ConfigError("algorithms[" + std::to_string(i) + "]." + e.field(), e.what());
    }
  }

  std::vector<std::vector<TrialRecord>> per_trial(config.trials);
  const std::size_t workers = std::clamp<std::size_t>(config.workers, 1, config.trials);
  if (workers == 1) {
    for (std::size_t t = 0; t < config.trials; ++t) per_trial[t] = run_trial(config, t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t t = next.fetch_add(1);
          if (t >= config.trials) return;
          try {
            per_trial[t] = run_trial(config, t);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next.store(config.trials);
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }

  CampaignResult result;
  for (auto& records : per_trial) {
    for (auto& r : records) result.records.push_back(std::move(r));
  }
  result.summary = summarize(result.records, config.termination.max_iter, config.stats_exclude_failures);
  return result;
}

BenchmarkSummary summarize(const std::vector<TrialRecord>& records, std::size_t max_iter, bool exclude_failures) {
  if (records.empty()) throw std::invalid_argument("summarize needs at least one record");
  std::vector<std::string> order;
  for (const auto& r : records) {
    if (std::find(order.begin(), order.end(), r.algorithm) == order.end()) order.push_back(r.algorithm);
  }
  BenchmarkSummary summary;
  for (const auto& name : order) {
    SummaryRow row;
    row.algorithm = name;
    std::vector<Statistic> values;
    for (const auto& r : records) {
      if (r.algorithm != name) continue;
      ++row.trials;
      if (!r.success) ++row.failures;
      if (exclude_failures && !r.success) continue;
      values.push_back(r.converged ? Statistic{static_cast<double>(r.iterations), false}
                                   : Statistic{static_cast<double>(max_iter), true});
    }
    if (values.empty()) {
      row.median = row.high = row.low = {static_cast<double>(max_iter), true};
    } else {
      std::stable_sort(values.begin(), values.end(), [](const Statistic& a, const Statistic& b) {
        return a.value < b.value || (a.value == b.value && !a.sentinel && b.sentinel);
      });
      row.low = values.front();
      row.high = values.back();
      row.median = order_statistic(values, 0.5 * static_cast<double>(values.size() - 1));
    }
    summary.rows.push_back(std::move(row));
  }
  return summary;
}

std::string emit_table(const BenchmarkSummary& summary, TableFormat format) {
  if (format == TableFormat::kCsv) {
    std::string out = "algorithm,failures,median,high,low\n";
    for (const auto& row : summary.rows) {
      out += row.algorithm + "," + std::to_string(row.failures) + "," + render(row.median) + "," +
             render(row.high) + "," + render(row.low) + "\n";
    }
    return out;
  }
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : summary.rows) {
    nlohmann::ordered_json j;
    j["algorithm"] = row.algorithm;
    j["trials"] = row.trials;
    j["failures"] = row.failures;
    j["median"] = statistic_to_json(row.median);
    j["high"] = statistic_to_json(row.high);
    j["low"] = statistic_to_json(row.low);
    rows.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

BenchmarkSummary summary_from_json(const std::string& text) {
  BenchmarkSummary summary;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& j : doc.at("rows")) {
      SummaryRow row;
      row.algorithm = j.at("algorithm").get<std::string>();
      row.trials = j.at("trials").get<std::size_t>();
      row.failures = j.at("failures").get<std::size_t>();
      row.median = statistic_from_json(j.at("median"));
      row.high = statistic_from_json(j.at("high"));
      row.low = statistic_from_json(j.at("low"));
      summary.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("summary JSON: ") + e.what());
  }
  return summary;
}

std::string emit_trace(const TrialRecord& record) {
  if (!record.trace) throw std::invalid_argument("record has no trace");
  std::string out = "iteration,iterate_change,gap\n";
  std::size_t k = 1;
  for (const auto& row : *record.trace) {
    out += std::to_string(k++) + "," + format_number(row.iterate_change) + "," + format_number(row.gap) + "\n";
  }
  return out;
}

std::string emit_records(const std::vector<TrialRecord>& records) {
  std::string out = "algorithm,trial,instance_seed,iterations,converged,diverged,success,final_gap,truth_distance\n";
  for (const auto& r : records) {
    out += r.algorithm + "," + std::to_string(r.trial) + "," + std::to_string(r.instance_seed) + "," +
           std::to_string(r.iterations) + "," + (r.converged ? "1" : "0") + "," + (r.diverged ? "1" : "0") +
           "," + (r.success ? "1" : "0") + "," + format_number(r.final_gap) + "," +
           format_number(r.truth_distance) + "\n";
  }
  return out;
}

}  // namespace proxbench
