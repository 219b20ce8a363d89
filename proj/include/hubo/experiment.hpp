#pragma once

// Experiment harness: flat key=value experiment specs, seeded repeats run
// on a worker pool, per-run trace CSVs, per-algorithm summaries, plot data
// and a JSON manifest.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "hubo/benchmarks.hpp"
#include "hubo/driver.hpp"

namespace hubo {

/// Invalid experiment specification; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class BudgetRule { ThirtyD, TenD, Explicit };

struct ExperimentSpec {
  std::string benchmark = "beale";
  std::optional<int> dim;
  std::vector<std::string> algorithms = {"hubo"};
  double alpha = -1.0;
  double lambda = 1.0;
  std::int64_t n0 = 1;
  std::optional<double> l_h;  ///< default: l_h_fraction of the X_0 side
  double l_h_fraction = 0.1;
  double delta = 0.1;
  double s1 = 1.0;
  double s2 = 1.0;
  double fraction = 0.2;
  double c_factor = 10.0;
  BudgetRule budget = BudgetRule::ThirtyD;
  std::int64_t budget_T = 0;  ///< used when budget == Explicit
  int repeats = 15;
  std::uint64_t seed = 0;
  std::string out = "results";
  double noise_std = 0.0;
  std::optional<int> n_init;
  int restarts = 20;
  int max_evals = 1000;
  IncumbentRule incumbent = IncumbentRule::BestObserved;
  KernelFamily kernel = KernelFamily::SquaredExponential;
  bool timing = false;
  int workers = 0;  ///< 0: one per hardware thread

  int resolved_dim() const { return make_benchmark(benchmark, dim).dim; }

  std::int64_t resolved_budget() const {
    switch (budget) {
      case BudgetRule::ThirtyD: return 30 * static_cast<std::int64_t>(resolved_dim());
      case BudgetRule::TenD: return 10 * static_cast<std::int64_t>(resolved_dim());
      case BudgetRule::Explicit: return budget_T;
    }
    return budget_T;
  }

  int resolved_n_init() const { return n_init ? *n_init : default_n_init(resolved_dim()); }

  /// Runs still proceed; the distance bound for the cube search needs lambda > d(alpha + 1).
  std::vector<std::string> warnings() const {
    std::vector<std::string> out;
    const bool hd = std::find(algorithms.begin(), algorithms.end(), "hdhubo") != algorithms.end();
    const int d = resolved_dim();
    if (hd && !(lambda > d * (alpha + 1.0))) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "lambda = %g <= d(alpha + 1) = %g: hypercube distance bound does not shrink",
                    lambda, d * (alpha + 1.0));
      out.emplace_back(buf);
    }
    return out;
  }

  void validate() const {
    try {
      (void)make_benchmark(benchmark, dim);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(dim ? "dim" : "benchmark", e.what());
    }
    if (algorithms.empty()) throw ConfigError("algorithms", "at least one algorithm is required");
    for (const auto& a : algorithms) {
      if (a != "hubo" && a != "hdhubo" && a != "vol2" && a != "random") {
        throw ConfigError("algorithms", "unknown algorithm '" + a + "'");
      }
    }
    if (repeats < 1) throw ConfigError("repeats", "must be >= 1");
    if (!(alpha >= -1.0 && alpha < 0.0)) throw ConfigError("alpha", "must lie in [-1, 0)");
    if (!(lambda >= 0.0)) throw ConfigError("lambda", "must be >= 0");
    if (n0 < 1) throw ConfigError("n0", "must be >= 1");
    if (l_h && !(*l_h > 0.0)) throw ConfigError("l_h", "must be positive");
    if (!(l_h_fraction > 0.0)) throw ConfigError("l_h_fraction", "must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta", "must lie in (0, 1)");
    if (!(s1 > 0.0)) throw ConfigError("s1", "must be positive");
    if (!(s2 > 0.0)) throw ConfigError("s2", "must be positive");
    if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("fraction", "must lie in (0, 1]");
    if (!(c_factor >= 1.0)) throw ConfigError("c_factor", "must be >= 1");
    if (budget == BudgetRule::Explicit && budget_T < 1) throw ConfigError("budget", "must be >= 1");
    if (!(noise_std >= 0.0)) throw ConfigError("noise_std", "must be >= 0");
    if (n_init && *n_init < 2) throw ConfigError("n_init", "must be >= 2");
    if (restarts < 1) throw ConfigError("restarts", "must be >= 1");
    if (max_evals < restarts) throw ConfigError("max_evals", "must be >= restarts");
    if (workers < 0) throw ConfigError("workers", "must be >= 0");
    if (out.empty()) throw ConfigError("out", "must not be empty");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out)) {
    throw ConfigError(key, "expected a number, got '" + v + "'");
  }
  return out;
}

inline std::int64_t parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long out = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true/false, got '" + v + "'");
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Applies one key=value setting; later settings override earlier ones.
inline void apply_setting(ExperimentSpec& spec, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = detail::trim(raw_key);
  const std::string v = detail::trim(raw_value);
  using namespace detail;
  if (key == "benchmark") {
    spec.benchmark = v;
  } else if (key == "dim") {
    spec.dim = static_cast<int>(parse_int(key, v));
  } else if (key == "algorithms") {
    spec.algorithms.clear();
    std::stringstream ss(v);
    for (std::string item; std::getline(ss, item, ',');) {
      if (!trim(item).empty()) spec.algorithms.push_back(trim(item));
    }
  } else if (key == "alpha") {
    spec.alpha = parse_double(key, v);
  } else if (key == "lambda") {
    spec.lambda = parse_double(key, v);
  } else if (key == "n0") {
    spec.n0 = parse_int(key, v);
  } else if (key == "l_h") {
    spec.l_h = parse_double(key, v);
  } else if (key == "l_h_fraction") {
    spec.l_h_fraction = parse_double(key, v);
  } else if (key == "delta") {
    spec.delta = parse_double(key, v);
  } else if (key == "s1") {
    spec.s1 = parse_double(key, v);
  } else if (key == "s2") {
    spec.s2 = parse_double(key, v);
  } else if (key == "fraction") {
    spec.fraction = parse_double(key, v);
  } else if (key == "c_factor") {
    spec.c_factor = parse_double(key, v);
  } else if (key == "budget") {
    if (v == "30d") {
      spec.budget = BudgetRule::ThirtyD;
    } else if (v == "10d") {
      spec.budget = BudgetRule::TenD;
    } else {
      spec.budget = BudgetRule::Explicit;
      spec.budget_T = parse_int(key, v);
    }
  } else if (key == "repeats") {
    spec.repeats = static_cast<int>(parse_int(key, v));
  } else if (key == "seed") {
    spec.seed = static_cast<std::uint64_t>(parse_int(key, v));
  } else if (key == "out") {
    spec.out = v;
  } else if (key == "noise_std") {
    spec.noise_std = parse_double(key, v);
  } else if (key == "n_init") {
    spec.n_init = static_cast<int>(parse_int(key, v));
  } else if (key == "restarts") {
    spec.restarts = static_cast<int>(parse_int(key, v));
  } else if (key == "max_evals") {
    spec.max_evals = static_cast<int>(parse_int(key, v));
  } else if (key == "incumbent") {
    if (v == "observed") {
      spec.incumbent = IncumbentRule::BestObserved;
    } else if (v == "posterior") {
      spec.incumbent = IncumbentRule::BestPosteriorMean;
    } else {
      throw ConfigError(key, "expected observed|posterior, got '" + v + "'");
    }
  } else if (key == "kernel") {
    if (v == "se") {
      spec.kernel = KernelFamily::SquaredExponential;
    } else if (v == "matern52") {
      spec.kernel = KernelFamily::Matern;
    } else {
      throw ConfigError(key, "expected se|matern52, got '" + v + "'");
    }
  } else if (key == "timing") {
    spec.timing = parse_bool(key, v);
  } else if (key == "workers") {
    spec.workers = static_cast<int>(parse_int(key, v));
  } else {
    throw ConfigError(key, "unknown key");
  }
}

/// Parses "key=value" (the form of both config lines and --set overrides).
inline void apply_assignment(ExperimentSpec& spec, const std::string& line) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) throw ConfigError(detail::trim(line), "expected key=value");
  apply_setting(spec, line.substr(0, eq), line.substr(eq + 1));
}

/// Flat config text: one key=value per line, '#' starts a comment.
inline ExperimentSpec parse_spec(std::istream& in, ExperimentSpec spec = {}) {
  for (std::string line; std::getline(in, line);) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    apply_assignment(spec, line);
  }
  return spec;
}

inline ExperimentSpec load_spec(const std::filesystem::path& path, const std::vector<std::string>& overrides = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  ExperimentSpec spec = parse_spec(in);
  for (const auto& o : overrides) apply_assignment(spec, o);
  return spec;
}

/// Every setting with defaults materialized, in a stable order.
inline std::map<std::string, std::string> resolved_config(const ExperimentSpec& spec) {
  using detail::format_double;
  std::map<std::string, std::string> m;
  const int d = spec.resolved_dim();
  std::string algs;
  for (const auto& a : spec.algorithms) algs += (algs.empty() ? "" : ",") + a;
  m["benchmark"] = spec.benchmark;
  m["dim"] = std::to_string(d);
  m["algorithms"] = algs;
  m["alpha"] = format_double(spec.alpha);
  m["lambda"] = format_double(spec.lambda);
  m["n0"] = std::to_string(spec.n0);
  m["l_h"] = spec.l_h ? format_double(*spec.l_h) : "auto";
  m["l_h_fraction"] = format_double(spec.l_h_fraction);
  m["delta"] = format_double(spec.delta);
  m["s1"] = format_double(spec.s1);
  m["s2"] = format_double(spec.s2);
  m["fraction"] = format_double(spec.fraction);
  m["c_factor"] = format_double(spec.c_factor);
  m["budget"] = spec.budget == BudgetRule::ThirtyD ? "30d" : spec.budget == BudgetRule::TenD ? "10d" : "explicit";
  m["budget_T"] = std::to_string(spec.resolved_budget());
  m["repeats"] = std::to_string(spec.repeats);
  m["seed"] = std::to_string(spec.seed);
  m["out"] = spec.out;
  m["noise_std"] = format_double(spec.noise_std);
  m["n_init"] = std::to_string(spec.resolved_n_init());
  m["restarts"] = std::to_string(spec.restarts);
  m["max_evals"] = std::to_string(spec.max_evals);
  m["incumbent"] = spec.incumbent == IncumbentRule::BestObserved ? "observed" : "posterior";
  m["kernel"] = spec.kernel == KernelFamily::SquaredExponential ? "se" : "matern52";
  m["timing"] = spec.timing ? "true" : "false";
  m["workers"] = std::to_string(spec.workers);
  const auto f = make_benchmark(spec.benchmark, spec.dim);
  m["domain"] = "[" + format_double(f.domain.lower[0]) + ", " + format_double(f.domain.upper[0]) + "]^" +
                std::to_string(d);
  return m;
}

/// RunConfig for one (algorithm, repeat); `algorithm` is hubo, hdhubo or vol2.
inline RunConfig make_run_config(const ExperimentSpec& spec, const std::string& algorithm, int repeat) {
  const auto f = make_benchmark(spec.benchmark, spec.dim);
  const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(repeat);
  const InitialSpace init = initial_space(f, spec.fraction, seed, spec.c_factor);
  RunConfig cfg;
  cfg.expansion = init.expansion(spec.alpha);
  cfg.budget_T = spec.resolved_budget();
  cfg.n_init = spec.resolved_n_init();
  cfg.seed = seed;
  cfg.incumbent = spec.incumbent;
  cfg.kernel = spec.kernel;
  cfg.record_wall_time = spec.timing;
  cfg.maximizer.restarts = spec.restarts;
  cfg.maximizer.max_evals = spec.max_evals;
  const double l_h = spec.l_h ? *spec.l_h : spec.l_h_fraction * (init.b - init.a);
  cfg.beta = {BetaVariant::HuBO, spec.delta, spec.s1, spec.s2, f.dim, init.a, init.b, spec.alpha, l_h};
  if (algorithm == "hubo") {
    cfg.algorithm = Algorithm::HuBO;
  } else if (algorithm == "vol2") {
    cfg.algorithm = Algorithm::Vol2;
  } else if (algorithm == "hdhubo") {
    cfg.algorithm = Algorithm::HdHuBO;
    cfg.beta.variant = BetaVariant::HdHuBO;
    cfg.hd = HdConfig{spec.lambda, spec.n0, l_h, seed};
  } else {
    throw ConfigError("algorithms", "no run configuration for '" + algorithm + "'");
  }
  return cfg;
}

/// One trace, run and scored. `random` searches the C_initial-sized region
/// around X_0 with the same total number of evaluations.
inline RunTrace run_single(const ExperimentSpec& spec, const std::string& algorithm, int repeat) {
  const auto f = make_benchmark(spec.benchmark, spec.dim);
  const Objective obj = f.objective(spec.noise_std);
  RunTrace trace;
  if (algorithm == "random") {
    const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(repeat);
    const InitialSpace init = initial_space(f, spec.fraction, seed, spec.c_factor);
    const Bounds region = init.expansion(spec.alpha).initial_domain();
    trace = random_search(obj, region, spec.resolved_n_init() + spec.resolved_budget(), seed);
  } else {
    trace = run(obj, make_run_config(spec, algorithm, repeat));
  }
  return compute_regret(std::move(trace), obj);
}

// ---------------------------------------------------------------------------
// CSV output

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline const char* kTraceHeader = "t,x,y,best_y,r_t,R_t,log_dist,side,n_cubes,wall_ms";
inline const char* kSummaryHeader = "t,mean_best_y,std_best_y,stderr_best_y,mean_log_dist,stderr_log_dist";

inline void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  using detail::format_double;
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  out << kTraceHeader << "\n";
  for (const auto& r : trace.records) {
    std::string x;
    for (Eigen::Index i = 0; i < r.x.size(); ++i) x += (i ? ";" : "") + format_double(r.x[i]);
    out << r.t << ',' << csv_escape(x) << ',' << format_double(r.y) << ',' << format_double(r.best_y) << ','
        << opt(r.regret) << ',' << opt(r.cumulative_regret) << ',' << opt(r.log_distance) << ','
        << format_double(r.side) << ',' << (r.n_cubes ? std::to_string(*r.n_cubes) : std::string()) << ','
        << format_double(r.wall_ms) << "\n";
  }
}

struct SummaryRow {
  std::int64_t t = 0;
  int n = 0;
  double mean_best_y = 0.0;
  double std_best_y = 0.0;
  double stderr_best_y = 0.0;
  std::optional<double> mean_log_dist;
  std::optional<double> stderr_log_dist;
};

namespace detail {

struct Moments {
  double mean = 0.0;
  double std = 0.0;     ///< sample standard deviation (n - 1); 0 when n == 1
  double stderr_ = 0.0;  ///< std / sqrt(n)
};

inline Moments moments(const std::vector<double>& v) {
  Moments m;
  const double n = static_cast<double>(v.size());
  if (v.empty()) return m;
  for (double x : v) m.mean += x;
  m.mean /= n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / (n - 1.0));
  }
  m.stderr_ = m.std / std::sqrt(n);
  return m;
}

}  // namespace detail

/// Per-iteration statistics across repeats. A trace contributes to row t
/// through its last record with that t, so t = 0 is the end of the initial
/// design.
inline std::vector<SummaryRow> summarize(const std::vector<RunTrace>& traces) {
  std::map<std::int64_t, std::vector<const IterationRecord*>> by_t;
  for (const auto& trace : traces) {
    std::map<std::int64_t, const IterationRecord*> last;
    for (const auto& r : trace.records) last[r.t] = &r;
    for (const auto& [t, r] : last) by_t[t].push_back(r);
  }
  std::vector<SummaryRow> rows;
  for (const auto& [t, recs] : by_t) {
    std::vector<double> best, logd;
    for (const auto* r : recs) {
      best.push_back(r->best_y);
      if (r->log_distance) logd.push_back(*r->log_distance);
    }
    const auto mb = detail::moments(best);
    SummaryRow row{t, static_cast<int>(recs.size()), mb.mean, mb.std, mb.stderr_, std::nullopt, std::nullopt};
    if (logd.size() == recs.size()) {
      const auto ml = detail::moments(logd);
      row.mean_log_dist = ml.mean;
      row.stderr_log_dist = ml.stderr_;
    }
    rows.push_back(row);
  }
  return rows;
}

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  using detail::format_double;
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  out << kSummaryHeader << "\n";
  for (const auto& r : rows) {
    out << r.t << ',' << format_double(r.mean_best_y) << ',' << format_double(r.std_best_y) << ','
        << format_double(r.stderr_best_y) << ',' << opt(r.mean_log_dist) << ',' << opt(r.stderr_log_dist) << "\n";
  }
}

/// Plot data: iteration, mean log10 distance to the optimum, its standard error.
inline void emit_log_distance(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "# t mean_log_dist stderr_log_dist\n";
  for (const auto& r : rows) {
    if (!r.mean_log_dist) throw std::invalid_argument("emit_log_distance: optimum unknown, no log distance");
    out << r.t << ' ' << detail::format_double(*r.mean_log_dist) << ' '
        << detail::format_double(*r.stderr_log_dist) << "\n";
  }
}

// ---------------------------------------------------------------------------
// Orchestration

struct ManifestEntry {
  std::string path;  ///< relative to the output directory
  std::string kind;  ///< trace | summary | log_distance
};

struct RunFailure {
  std::string algorithm;
  int repeat = 0;
  std::string error;
};

struct Manifest {
  std::filesystem::path directory;
  std::map<std::string, std::string> config;
  std::vector<ManifestEntry> files;
  std::vector<RunFailure> failures;
  std::vector<std::string> warnings;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["config"] = nlohmann::ordered_json(config);
    j["files"] = nlohmann::ordered_json::array();
    for (const auto& f : files) j["files"].push_back({{"path", f.path}, {"kind", f.kind}});
    j["warnings"] = warnings;
    j["failures"] = nlohmann::ordered_json::array();
    for (const auto& f : failures) {
      j["failures"].push_back({{"algorithm", f.algorithm}, {"repeat", f.repeat}, {"error", f.error}});
    }
    return j;
  }
};

inline std::string trace_file_name(const std::string& algorithm, int repeat) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "trace_%s_r%03d.csv", algorithm.c_str(), repeat);
  return buf;
}

/// Runs `fn(i)` for i in [0, n) on `workers` threads.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t pool = std::min<std::size_t>(n, workers > 0 ? static_cast<std::size_t>(workers) : hw);
  if (pool <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < pool; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : threads) th.join();
}

/// Runs every (algorithm, repeat) with seed = base seed + repeat and writes
/// traces, summaries, log-distance plot data and manifest.json under spec.out.
///
/// `runner(algorithm, repeat)` produces one scored trace; a throwing runner
/// is recorded as a failed run and the remaining runs continue.
template <class Runner>
Manifest run_experiment(const ExperimentSpec& spec, Runner&& runner) {
  spec.validate();
  namespace fs = std::filesystem;
  const fs::path dir(spec.out);
  fs::create_directories(dir);

  struct Job {
    std::string algorithm;
    int repeat;
  };
  std::vector<Job> jobs;
  for (const auto& a : spec.algorithms) {
    for (int r = 0; r < spec.repeats; ++r) jobs.push_back({a, r});
  }
  std::vector<RunTrace> traces(jobs.size());
  parallel_for(jobs.size(), spec.workers, [&](std::size_t i) {
    try {
      traces[i] = runner(jobs[i].algorithm, jobs[i].repeat);
    } catch (const std::exception& e) {
      traces[i].complete = false;
      traces[i].error = e.what();
    }
    std::ofstream out(dir / trace_file_name(jobs[i].algorithm, jobs[i].repeat), std::ios::binary);
    write_trace_csv(out, traces[i]);
  });

  Manifest manifest;
  manifest.directory = dir;
  manifest.config = resolved_config(spec);
  manifest.warnings = spec.warnings();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    manifest.files.push_back({trace_file_name(jobs[i].algorithm, jobs[i].repeat), "trace"});
    if (!traces[i].complete) manifest.failures.push_back({jobs[i].algorithm, jobs[i].repeat, traces[i].error});
  }
  for (const auto& a : spec.algorithms) {
    std::vector<RunTrace> mine;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].algorithm == a) mine.push_back(traces[i]);
    }
    const auto rows = summarize(mine);
    const std::string summary = "summary_" + a + ".csv";
    std::ofstream s(dir / summary, std::ios::binary);
    write_summary_csv(s, rows);
    manifest.files.push_back({summary, "summary"});
    if (!rows.empty() && rows.front().mean_log_dist) {
      const std::string plot = "log_distance_" + a + ".dat";
      std::ofstream p(dir / plot, std::ios::binary);
      emit_log_distance(p, rows);
      manifest.files.push_back({plot, "log_distance"});
    }
  }
  manifest.files.push_back({"manifest.json", "manifest"});
  std::ofstream m(dir / "manifest.json", std::ios::binary);
  m << manifest.to_json().dump(2) << "\n";
  return manifest;
}

inline Manifest run_experiment(const ExperimentSpec& spec) {
  return run_experiment(spec, [&](const std::string& algorithm, int repeat) {
    return run_single(spec, algorithm, repeat);
  });
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitPartialFailure = 3;

inline int exit_code(const Manifest& m) { return m.failures.empty() ? kExitOk : kExitPartialFailure; }

}  // namespace hubo
