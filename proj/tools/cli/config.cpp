#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include <proxbench/dataset.hpp>
#include <proxbench/error.hpp>

namespace proxbench::cli {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string type_name(const json& j) { return j.type_name(); }

// Typed access to one JSON object; finish() rejects keys nobody asked for.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_, "expected an object, got " + type_name(j));
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string path(const std::string& key) const { return join(path_, key); }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = raw(key);
    if (!v) throw ConfigError(path(key), "missing required key");
    return *v;
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = raw(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(path(key), "expected a boolean, got " + type_name(*v));
    return v->get<bool>();
  }

  double number(const std::string& key, double fallback) {
    const json* v = raw(key);
    return v ? as_number(*v, path(key)) : fallback;
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback) {
    const json* v = raw(key);
    return v ? as_count(*v, path(key)) : fallback;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const json* v = raw(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(path(key), "expected a string, got " + type_name(*v));
    return v->get<std::string>();
  }

  void finish(const std::string& context = {}) const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ConfigError(path(it.key()), context.empty() ? "unknown key" : "unknown key for " + context);
      }
    }
  }

  static double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where, "expected a number, got " + type_name(v));
    return v.get<double>();
  }

  static std::uint64_t as_count(const json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) throw ConfigError(where, "must be non-negative");
    throw ConfigError(where, "expected a non-negative integer, got " + type_name(v));
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::pair<double, double> range(Fields& f, const std::string& key, std::pair<double, double> fallback) {
  const json* v = f.raw(key);
  if (!v) return fallback;
  if (!v->is_array() || v->size() != 2) throw ConfigError(f.path(key), "expected [low, high]");
  const double lo = Fields::as_number((*v)[0], f.path(key) + "[0]");
  const double hi = Fields::as_number((*v)[1], f.path(key) + "[1]");
  if (!(lo > 0.0 && lo <= hi)) throw ConfigError(f.path(key), "need 0 < low <= high");
  return {lo, hi};
}

std::size_t positive(Fields& f, const std::string& key, std::size_t fallback) {
  const auto v = f.count(key, fallback);
  if (v < 1) throw ConfigError(f.path(key), "must be at least 1");
  return static_cast<std::size_t>(v);
}

const std::map<std::string, ToyKind>& toy_names() {
  static const std::map<std::string, ToyKind> names{
      {"two_lines", ToyKind::kTwoLines}, {"circle_line", ToyKind::kCircleLine},
      {"disjoint_circles", ToyKind::kDisjointCircles}};
  return names;
}

std::string toy_name(ToyKind kind) {
  for (const auto& [name, k] : toy_names()) {
    if (k == kind) return name;
  }
  return "two_lines";
}

MaskAlphabet parse_masks(Fields& f) {
  const std::string name = f.text("mask_alphabet", "uniform");
  if (name == "uniform") return MaskAlphabet::kUniform;
  if (name == "octanary") return MaskAlphabet::kOctanary;
  throw ConfigError(f.path("mask_alphabet"), "expected \"uniform\" or \"octanary\", got \"" + name + "\"");
}

std::string valid_families() {
  std::string out;
  for (auto f : {Family::kCdp1D, Family::kCdp2D, Family::kSparseDots, Family::kSrcLoc, Family::kFile, Family::kToy}) {
    if (!out.empty()) out += ", ";
    out += to_string(f);
  }
  return out;
}

std::string valid_algorithms() {
  std::string out;
  for (auto k : all_algorithm_kinds()) {
    if (!out.empty()) out += ", ";
    out += to_string(k);
  }
  return out;
}

ProblemConfig parse_problem(const json& j, const std::filesystem::path& base_dir) {
  Fields f(j, "problem");
  ProblemConfig p;
  const std::string family = f.text("family", "");
  if (family.empty()) throw ConfigError(f.path("family"), "missing required key");
  const auto parsed = parse_family(family);
  if (!parsed) throw ConfigError(f.path("family"), "unknown family \"" + family + "\"; expected one of " + valid_families());
  p.family = *parsed;

  switch (p.family) {
    case Family::kCdp1D:
      p.dims = {positive(f, "n", 128)};
      p.m = positive(f, "m", 10);
      p.masks = parse_masks(f);
      break;
    case Family::kCdp2D:
      p.dims = {positive(f, "rows", 64), positive(f, "cols", 64)};
      p.m = positive(f, "m", 10);
      p.masks = parse_masks(f);
      break;
    case Family::kSparseDots: {
      p.dims = {positive(f, "rows", 64), positive(f, "cols", 64)};
      p.dots.rows = p.dims[0];
      p.dots.cols = p.dims[1];
      p.dots.dots = positive(f, "dots", p.dots.dots);
      p.dots.s_factor = f.number("s_factor", p.dots.s_factor);
      if (!(p.dots.s_factor >= 1.0)) throw ConfigError(f.path("s_factor"), "must be at least 1");
      std::tie(p.dots.min_height, p.dots.max_height) =
          range(f, "heights", {p.dots.min_height, p.dots.max_height});
      std::tie(p.dots.min_width, p.dots.max_width) = range(f, "widths", {p.dots.min_width, p.dots.max_width});
      p.dots.support_cutoff = f.number("support_cutoff", p.dots.support_cutoff);
      if (!(p.dots.support_cutoff > 0.0 && p.dots.support_cutoff < 1.0)) {
        throw ConfigError(f.path("support_cutoff"), "must lie in (0, 1)");
      }
      break;
    }
    case Family::kSrcLoc:
      p.m = positive(f, "m", 10);
      if (p.m < 3) throw ConfigError(f.path("m"), "needs at least 3 sensors");
      p.noise = f.boolean("noise", false);
      break;
    case Family::kFile: {
      const std::string path = f.text("path", "");
      if (path.empty()) throw ConfigError(f.path("path"), "missing required key");
      std::filesystem::path resolved(path);
      if (resolved.is_relative() && !base_dir.empty()) resolved = base_dir / resolved;
      p.path = resolved.lexically_normal().string();
      break;
    }
    case Family::kToy: {
      const std::string name = f.text("name", "two_lines");
      const auto it = toy_names().find(name);
      if (it == toy_names().end()) {
        throw ConfigError(f.path("name"), "unknown toy \"" + name + "\"; expected two_lines, circle_line or disjoint_circles");
      }
      p.toy = it->second;
      if (p.toy == ToyKind::kTwoLines) p.angle = f.number("angle", p.angle);
      break;
    }
  }
  f.finish("family " + family);
  return p;
}

ordered_json dump_problem(const ProblemConfig& p) {
  ordered_json j;
  j["family"] = std::string(to_string(p.family));
  const char* masks = p.masks == MaskAlphabet::kOctanary ? "octanary" : "uniform";
  switch (p.family) {
    case Family::kCdp1D:
      j["n"] = p.dims.at(0);
      j["m"] = p.m;
      j["mask_alphabet"] = masks;
      break;
    case Family::kCdp2D:
      j["rows"] = p.dims.at(0);
      j["cols"] = p.dims.at(1);
      j["m"] = p.m;
      j["mask_alphabet"] = masks;
      break;
    case Family::kSparseDots:
      j["rows"] = p.dims.at(0);
      j["cols"] = p.dims.at(1);
      j["dots"] = p.dots.dots;
      j["s_factor"] = p.dots.s_factor;
      j["heights"] = {p.dots.min_height, p.dots.max_height};
      j["widths"] = {p.dots.min_width, p.dots.max_width};
      j["support_cutoff"] = p.dots.support_cutoff;
      break;
    case Family::kSrcLoc:
      j["m"] = p.m;
      j["noise"] = p.noise;
      break;
    case Family::kFile:
      j["path"] = p.path;
      break;
    case Family::kToy:
      j["name"] = toy_name(p.toy);
      if (p.toy == ToyKind::kTwoLines) j["angle"] = p.angle;
      break;
  }
  return j;
}

bool uses_lambda(AlgorithmKind k) {
  return k == AlgorithmKind::kCDRL || k == AlgorithmKind::kDRL || k == AlgorithmKind::kDRAP;
}

// Keys accepted for an algorithm entry of kind `k`.
std::vector<std::string> algorithm_keys(AlgorithmKind k) {
  std::vector<std::string> keys{"name", "label", "warm_start", "warm_start_iters"};
  if (uses_lambda(k)) keys.push_back("lambda");
  if (k == AlgorithmKind::kADMM1) keys.insert(keys.end(), {"eta", "admm1_scaled_dual"});
  if (k == AlgorithmKind::kADMM2) keys.push_back("rho");
  if (k == AlgorithmKind::kWF) keys.push_back("mu");
  if (k == AlgorithmKind::kDYREPR) keys.push_back("c");
  if (k == AlgorithmKind::kQNAVP) keys.push_back("quasi_newton");
  if (k == AlgorithmKind::kCDRL) keys.push_back("cdrl_inner_relax");
  return keys;
}

QuasiNewtonOptions parse_quasi_newton(const json& j, const std::string& path) {
  Fields f(j, path);
  QuasiNewtonOptions q;
  q.memory = positive(f, "memory", q.memory);
  q.curvature_floor = f.number("curvature_floor", q.curvature_floor);
  q.ratio_threshold = f.number("ratio_threshold", q.ratio_threshold);
  q.armijo_slope = f.number("armijo_slope", q.armijo_slope);
  q.backtrack = f.number("backtrack", q.backtrack);
  q.max_radius_reductions = positive(f, "max_radius_reductions", q.max_radius_reductions);
  f.finish();
  return q;
}

AlgorithmEntry parse_algorithm(const json& j, const std::string& path, const Flags& flags) {
  Fields f(j, path);
  const std::string name = f.text("name", "");
  if (name.empty()) throw ConfigError(f.path("name"), "missing required key");
  const auto kind = parse_algorithm_kind(name);
  if (!kind) throw ConfigError(f.path("name"), "unknown algorithm \"" + name + "\"; expected one of " + valid_algorithms());

  AlgorithmSpec spec = AlgorithmSpec::defaults(*kind);
  const auto keys = algorithm_keys(*kind);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
      throw ConfigError(f.path(it.key()), "not a parameter of " + std::string(to_string(*kind)));
    }
  }

  if (f.has("warm_start") && f.has("warm_start_iters")) {
    throw ConfigError(f.path("warm_start"), "give either warm_start or warm_start_iters");
  }
  if (f.boolean("warm_start", false)) spec.warm_start_iters = kDefaultWarmStartIters;
  spec.warm_start_iters = f.count("warm_start_iters", spec.warm_start_iters);
  spec.lambda = f.number("lambda", spec.lambda);
  spec.eta = f.number("eta", spec.eta);
  spec.c = f.number("c", spec.c);
  if (const json* rho = f.raw("rho")) {
    spec.rho.clear();
    if (rho->is_array()) {
      for (std::size_t i = 0; i < rho->size(); ++i) {
        spec.rho.push_back(Fields::as_number((*rho)[i], f.path("rho") + "[" + std::to_string(i) + "]"));
      }
    } else {
      spec.rho.push_back(Fields::as_number(*rho, f.path("rho")));
    }
  }
  if (const json* mu = f.raw("mu")) {
    if (!mu->is_null()) spec.mu = Fields::as_number(*mu, f.path("mu"));
  }
  if (const json* qn = f.raw("quasi_newton")) spec.quasi_newton = parse_quasi_newton(*qn, f.path("quasi_newton"));
  spec.admm1_scaled_dual = f.boolean("admm1_scaled_dual", flags.admm1_scaled_dual);
  spec.cdrl_inner_relax = f.boolean("cdrl_inner_relax", flags.cdrl_inner_relax);
  // Flags that do not apply to the kind stay at their defaults.
  if (*kind != AlgorithmKind::kADMM1) spec.admm1_scaled_dual = false;
  if (*kind != AlgorithmKind::kCDRL) spec.cdrl_inner_relax = false;

  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(f.path(e.field()), e.what());
  }

  std::string label = std::string(to_string(*kind)) + (spec.warm_start_iters > 0 ? "-warm" : "");
  label = f.text("label", label);
  if (label.empty() || label.find_first_of(",\n\"") != std::string::npos) {
    throw ConfigError(f.path("label"), "must be non-empty without commas, quotes or newlines");
  }
  f.finish();
  return {label, spec};
}

ordered_json dump_algorithm(const AlgorithmEntry& e) {
  const AlgorithmSpec& s = e.spec;
  ordered_json j;
  j["name"] = std::string(to_string(s.kind));
  j["label"] = e.label;
  j["warm_start_iters"] = s.warm_start_iters;
  if (uses_lambda(s.kind)) j["lambda"] = s.lambda;
  if (s.kind == AlgorithmKind::kADMM1) {
    j["eta"] = s.eta;
    j["admm1_scaled_dual"] = s.admm1_scaled_dual;
  }
  if (s.kind == AlgorithmKind::kADMM2) j["rho"] = s.rho;
  if (s.kind == AlgorithmKind::kWF) j["mu"] = s.mu ? ordered_json(*s.mu) : ordered_json(nullptr);
  if (s.kind == AlgorithmKind::kDYREPR) j["c"] = s.c;
  if (s.kind == AlgorithmKind::kCDRL) j["cdrl_inner_relax"] = s.cdrl_inner_relax;
  if (s.kind == AlgorithmKind::kQNAVP) {
    const auto& q = s.quasi_newton;
    j["quasi_newton"] = {{"memory", q.memory},
                         {"curvature_floor", q.curvature_floor},
                         {"ratio_threshold", q.ratio_threshold},
                         {"armijo_slope", q.armijo_slope},
                         {"backtrack", q.backtrack},
                         {"max_radius_reductions", q.max_radius_reductions}};
  }
  return j;
}

Flags parse_flags(const json* j) {
  Flags flags;
  if (!j) return flags;
  Fields f(*j, "flags");
  flags.trace = f.boolean("trace", false);
  flags.stats_exclude_failures = f.boolean("stats_exclude_failures", false);
  flags.admm1_scaled_dual = f.boolean("admm1_scaled_dual", false);
  flags.cdrl_inner_relax = f.boolean("cdrl_inner_relax", false);
  flags.phase_rotation_termination = f.boolean("phase_rotation_termination", false);
  f.finish();
  return flags;
}

OutputConfig parse_output(const json* j) {
  OutputConfig out;
  if (!j) return out;
  Fields f(*j, "output");
  out.dir = f.text("dir", out.dir);
  const std::string format = f.text("format", "both");
  if (format == "csv") {
    out.format = OutputFormat::kCsv;
  } else if (format == "json") {
    out.format = OutputFormat::kJson;
  } else if (format == "both") {
    out.format = OutputFormat::kBoth;
  } else {
    throw ConfigError(f.path("format"), "expected \"csv\", \"json\" or \"both\"");
  }
  out.records = f.boolean("records", out.records);
  f.finish();
  return out;
}

std::string format_name(OutputFormat format) {
  switch (format) {
    case OutputFormat::kCsv: return "csv";
    case OutputFormat::kJson: return "json";
    case OutputFormat::kBoth: return "both";
  }
  return "both";
}

std::string parse_error_position(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Config parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "invalid JSON at " + parse_error_position(text, e.byte) + ": " + e.what());
  }

  Fields root(doc, "");
  Config c;
  c.problem = parse_problem(root.require("problem"), base_dir);
  c.flags = parse_flags(root.raw("flags"));

  const json& algos = root.require("algorithms");
  if (!algos.is_array() || algos.empty()) throw ConfigError("algorithms", "expected a non-empty array");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < algos.size(); ++i) {
    const std::string path = "algorithms[" + std::to_string(i) + "]";
    AlgorithmEntry entry = parse_algorithm(algos[i], path, c.flags);
    if (!labels.insert(entry.label).second) {
      throw ConfigError(path + ".label", "duplicate label \"" + entry.label + "\"");
    }
    c.algorithms.push_back(std::move(entry));
  }

  c.termination = default_termination(c.problem);
  if (const json* t = root.raw("termination")) {
    Fields f(*t, "termination");
    c.termination.tol = f.number("tol", c.termination.tol);
    c.termination.max_iter = positive(f, "max_iter", c.termination.max_iter);
    f.finish();
  }
  if (!(c.termination.tol > 0.0)) throw ConfigError("termination.tol", "must be positive");
  c.termination.trace = c.flags.trace;
  c.termination.phase_rotation = c.flags.phase_rotation_termination;

  if (const json* s = root.raw("success"); s && !s->is_null()) {
    Fields f(*s, "success");
    SuccessCriteria criteria;
    criteria.threshold = Fields::as_number(f.require("threshold"), f.path("threshold"));
    if (!(criteria.threshold > 0.0)) throw ConfigError(f.path("threshold"), "must be positive");
    criteria.support_only = f.boolean("support_only", false);
    f.finish();
    c.success = criteria;
  }

  c.trials = positive(root, "trials", 1);
  c.base_seed = root.count("base_seed", 0);
  c.workers = static_cast<std::size_t>(root.count("workers", 0));
  c.output = parse_output(root.raw("output"));
  root.finish();
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

std::string dump_config(const Config& c) {
  ordered_json j;
  j["problem"] = dump_problem(c.problem);
  ordered_json algos = ordered_json::array();
  for (const auto& e : c.algorithms) algos.push_back(dump_algorithm(e));
  j["algorithms"] = std::move(algos);
  j["termination"] = {{"tol", c.termination.tol}, {"max_iter", c.termination.max_iter}};
  if (c.success) {
    j["success"] = {{"threshold", c.success->threshold}, {"support_only", c.success->support_only}};
  } else {
    j["success"] = nullptr;
  }
  j["trials"] = c.trials;
  j["base_seed"] = c.base_seed;
  j["workers"] = c.workers;
  j["flags"] = {{"trace", c.flags.trace},
                {"stats_exclude_failures", c.flags.stats_exclude_failures},
                {"admm1_scaled_dual", c.flags.admm1_scaled_dual},
                {"cdrl_inner_relax", c.flags.cdrl_inner_relax},
                {"phase_rotation_termination", c.flags.phase_rotation_termination}};
  j["output"] = {{"dir", c.output.dir}, {"format", format_name(c.output.format)}, {"records", c.output.records}};
  return j.dump(2) + "\n";
}

Instance make_instance(const ProblemConfig& p, std::uint64_t seed) {
  switch (p.family) {
    case Family::kCdp1D: return gen_cdp(Shape{p.dims.at(0)}, p.m, seed, p.masks);
    case Family::kCdp2D: return gen_cdp(Shape{p.dims.at(0), p.dims.at(1)}, p.m, seed, p.masks);
    case Family::kSparseDots: return gen_sparse_dots(p.dots, seed);
    case Family::kSrcLoc: return gen_srcloc(p.m, p.noise, seed);
    case Family::kFile: return load_dataset(p.path);
    case Family::kToy:
      switch (p.toy) {
        case ToyKind::kTwoLines: return toy_two_lines(p.angle);
        case ToyKind::kCircleLine: return toy_circle_line();
        case ToyKind::kDisjointCircles: return toy_disjoint_circles();
      }
  }
  throw ConfigError("problem.family", "unsupported family");
}

CampaignConfig to_campaign(const Config& c) {
  CampaignConfig out;
  out.make_instance = [problem = c.problem](std::uint64_t seed) { return make_instance(problem, seed); };
  out.algorithms = c.algorithms;
  out.termination = c.termination;
  out.criteria = c.success;
  out.trials = c.trials;
  out.base_seed = c.base_seed;
  out.workers = c.workers > 0 ? c.workers : std::max(1u, std::thread::hardware_concurrency());
  out.stats_exclude_failures = c.flags.stats_exclude_failures;
  return out;
}

std::vector<std::string> problem_names() {
  return {"cdp1d",          "cdp2d",     "sparse_dots", "srcloc3",     "srcloc3_noisy",   "srcloc10",
          "srcloc10_noisy", "two_lines", "circle_line", "disjoint_circles", "file:<path>"};
}

ProblemConfig named_problem(const std::string& name) {
  ProblemConfig p;
  if (name == "cdp1d") {
    p.family = Family::kCdp1D;
    p.dims = {128};
  } else if (name == "cdp2d") {
    p.family = Family::kCdp2D;
    p.dims = {64, 64};
  } else if (name == "sparse_dots") {
    p.family = Family::kSparseDots;
    p.dims = {p.dots.rows, p.dots.cols};
  } else if (name.rfind("srcloc", 0) == 0) {
    p.family = Family::kSrcLoc;
    std::string rest = name.substr(6);
    if (rest.size() > 6 && rest.compare(rest.size() - 6, 6, "_noisy") == 0) {
      p.noise = true;
      rest.resize(rest.size() - 6);
    }
    if (rest == "3") {
      p.m = 3;
    } else if (rest == "10") {
      p.m = 10;
    } else {
      throw ConfigError("problem", "unknown problem \"" + name + "\"");
    }
  } else if (name.rfind("file:", 0) == 0 && name.size() > 5) {
    p.family = Family::kFile;
    p.path = name.substr(5);
  } else if (auto it = toy_names().find(name); it != toy_names().end()) {
    p.family = Family::kToy;
    p.toy = it->second;
  } else {
    std::string valid;
    for (const auto& n : problem_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError("problem", "unknown problem \"" + name + "\"; expected one of " + valid);
  }
  return p;
}

Termination default_termination(const ProblemConfig& p) {
  switch (p.family) {
    case Family::kCdp1D: return {1e-10, 6000};
    case Family::kCdp2D: return {1e-8, 6000};
    case Family::kSparseDots: return {1e-10, 6000};
    case Family::kSrcLoc: return {1e-11, 10000};
    case Family::kFile: return {5e-5, 6000};
    case Family::kToy: return {1e-11, 10000};
  }
  return {};
}

}  // namespace proxbench::cli
