#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hubo/experiment.hpp"

using namespace hubo;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hubo_test_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentSpec small_spec(const fs::path& out) {
  ExperimentSpec s;
  s.benchmark = "beale";
  s.budget = BudgetRule::Explicit;
  s.budget_T = 4;
  s.repeats = 1;
  s.restarts = 4;
  s.max_evals = 100;
  s.out = out.string();
  s.workers = 1;
  return s;
}

IterationRecord rec(std::int64_t t, double best_y, double log_dist) {
  IterationRecord r;
  r.t = t;
  r.x = Eigen::VectorXd::Zero(1);
  r.best_y = best_y;
  r.log_distance = log_dist;
  return r;
}

}  // namespace

TEST(Spec, ParsesFileWithCommentsAndDefaults) {
  std::istringstream in(
      "# comment\n"
      "benchmark = ackley\n"
      "dim=3\n"
      "algorithms = hubo, hdhubo ,random\n"
      "alpha=-0.5   # trailing\n"
      "budget=10d\n"
      "\n"
      "repeats=4\n"
      "seed=12\n"
      "kernel=matern52\n"
      "incumbent=posterior\n");
  const auto s = parse_spec(in);
  EXPECT_EQ(s.benchmark, "ackley");
  EXPECT_EQ(s.resolved_dim(), 3);
  EXPECT_EQ(s.algorithms, (std::vector<std::string>{"hubo", "hdhubo", "random"}));
  EXPECT_EQ(s.alpha, -0.5);
  EXPECT_EQ(s.resolved_budget(), 30);
  EXPECT_EQ(s.repeats, 4);
  EXPECT_EQ(s.seed, 12u);
  EXPECT_EQ(s.kernel, KernelFamily::Matern);
  EXPECT_EQ(s.incumbent, IncumbentRule::BestPosteriorMean);
  EXPECT_EQ(s.resolved_n_init(), 4);
  EXPECT_NO_THROW(s.validate());
}

TEST(Spec, BudgetRules) {
  ExperimentSpec s;
  s.benchmark = "hartmann6";
  EXPECT_EQ(s.resolved_budget(), 180);
  apply_assignment(s, "budget=10d");
  EXPECT_EQ(s.resolved_budget(), 60);
  apply_assignment(s, "budget=17");
  EXPECT_EQ(s.resolved_budget(), 17);
}

TEST(Spec, OverridesLaterWins) {
  const fs::path dir = scratch("overrides");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "exp.cfg");
    f << "benchmark=beale\nrepeats=3\n";
  }
  const auto s = load_spec(dir / "exp.cfg", {"repeats=5", "alpha=-0.2", "repeats=7"});
  EXPECT_EQ(s.repeats, 7);
  EXPECT_EQ(s.alpha, -0.2);
}

TEST(Spec, ErrorsNameTheField) {
  auto field_of = [](auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  ExperimentSpec s;
  EXPECT_EQ(field_of([&] { apply_assignment(s, "colour=blue"); }), "colour");
  EXPECT_EQ(field_of([&] { apply_assignment(s, "alpha=abc"); }), "alpha");
  EXPECT_EQ(field_of([&] { apply_assignment(s, "repeats=2.5"); }), "repeats");
  EXPECT_EQ(field_of([&] { apply_assignment(s, "kernel=rbf"); }), "kernel");
  EXPECT_EQ(field_of([&] { apply_assignment(s, "no equals sign"); }), "no equals sign");
  EXPECT_EQ(field_of([&] { load_spec("/nonexistent/exp.cfg"); }), "config");

  auto invalid = [&](const std::string& a) {
    ExperimentSpec t;
    apply_assignment(t, a);
    return field_of([&] { t.validate(); });
  };
  EXPECT_EQ(invalid("repeats=0"), "repeats");
  EXPECT_EQ(invalid("alpha=0"), "alpha");
  EXPECT_EQ(invalid("algorithms=hubo,ubo"), "algorithms");
  EXPECT_EQ(invalid("benchmark=sphere"), "benchmark");
  EXPECT_EQ(invalid("dim=4"), "dim");
  EXPECT_EQ(invalid("fraction=1.5"), "fraction");
  EXPECT_EQ(invalid("delta=1"), "delta");
  EXPECT_EQ(invalid("max_evals=3"), "max_evals");
}

TEST(Spec, WarnsOutsideTheoryRegime) {
  ExperimentSpec s;
  s.algorithms = {"hdhubo"};
  EXPECT_TRUE(s.warnings().empty());
  s.lambda = 0.0;
  s.alpha = -0.5;
  EXPECT_EQ(s.warnings().size(), 1u);
  s.algorithms = {"hubo"};
  EXPECT_TRUE(s.warnings().empty());
}

TEST(Spec, ResolvedConfigMaterializesDefaults) {
  ExperimentSpec s;
  const auto m = resolved_config(s);
  for (const char* k : {"benchmark", "dim", "algorithms", "alpha", "lambda", "n0", "l_h", "delta", "fraction",
                        "budget", "budget_T", "repeats", "seed", "out", "n_init", "restarts", "max_evals", "kernel",
                        "incumbent", "domain"}) {
    EXPECT_TRUE(m.count(k)) << k;
  }
  EXPECT_EQ(m.at("budget_T"), "60");
  EXPECT_EQ(m.at("dim"), "2");
}

TEST(RunConfig, FollowsProtocol) {
  ExperimentSpec s;
  s.benchmark = "ackley";
  s.dim = 4;
  const auto cfg = make_run_config(s, "hdhubo", 3);
  EXPECT_EQ(cfg.seed, 3u);
  EXPECT_NEAR(cfg.expansion.width(), 0.2 * 65.536, 1e-12);
  EXPECT_NEAR(cfg.expansion.c_max - cfg.expansion.c_min, 10 * 0.2 * 65.536, 1e-9);
  ASSERT_TRUE(cfg.hd.has_value());
  EXPECT_NEAR(cfg.hd->l_h, 0.1 * cfg.expansion.width(), 1e-12);
  EXPECT_EQ(cfg.beta.variant, BetaVariant::HdHuBO);
  EXPECT_EQ(cfg.budget_T, 120);
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(make_run_config(s, "vol2", 0).algorithm, Algorithm::Vol2);
  EXPECT_THROW(make_run_config(s, "random", 0), ConfigError);
}

TEST(Csv, Quoting) {
  EXPECT_EQ(csv_escape("1;2;3"), "1;2;3");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, TraceSchema) {
  RunTrace t;
  IterationRecord r = rec(1, 0.5, -2.0);
  r.x = Eigen::Vector2d(0.25, -1.5);
  r.y = 0.5;
  r.regret = 0.01;
  r.cumulative_regret = 0.01;
  r.side = 2.0;
  r.n_cubes = 3;
  t.records.push_back(r);
  std::ostringstream out;
  write_trace_csv(out, t);
  EXPECT_EQ(out.str(),
            "t,x,y,best_y,r_t,R_t,log_dist,side,n_cubes,wall_ms\n"
            "1,0.25;-1.5,0.5,0.5,0.01,0.01,-2,2,3,0\n");
}

TEST(Summary, StdErrIsStdOverSqrtN) {
  std::vector<RunTrace> traces(4);
  const double best[4][3] = {{1.0, 2.0, 3.0}, {0.5, 2.5, 2.7}, {0.9, 1.0, 4.0}, {1.3, 1.9, 3.3}};
  for (int r = 0; r < 4; ++r) {
    for (int t = 0; t < 3; ++t) traces[r].records.push_back(rec(t, best[r][t], -best[r][t]));
  }
  const auto rows = summarize(traces);
  ASSERT_EQ(rows.size(), 3u);
  for (int t = 0; t < 3; ++t) {
    double mean = 0.0;
    for (int r = 0; r < 4; ++r) mean += best[r][t] / 4;
    double ss = 0.0;
    for (int r = 0; r < 4; ++r) ss += (best[r][t] - mean) * (best[r][t] - mean);
    const double sd = std::sqrt(ss / 3.0);
    EXPECT_NEAR(rows[t].mean_best_y, mean, 1e-12);
    EXPECT_NEAR(rows[t].std_best_y, sd, 1e-12);
    EXPECT_NEAR(rows[t].stderr_best_y, rows[t].std_best_y / 2.0, 1e-12);
    EXPECT_NEAR(*rows[t].mean_log_dist, -mean, 1e-12);
    EXPECT_EQ(rows[t].n, 4);
  }
}

TEST(Summary, InitialDesignCollapsesToLastRecord) {
  RunTrace tr;
  tr.records = {rec(0, 1.0, 0), rec(0, 2.0, 0), rec(0, 2.0, 0), rec(1, 5.0, 0)};
  const auto rows = summarize({tr});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].t, 0);
  EXPECT_EQ(rows[0].mean_best_y, 2.0);
  EXPECT_EQ(rows[0].stderr_best_y, 0.0);
}

TEST(LogDistance, Examples) {
  // Gap 0.01 -> -2; hitting the optimum at t = 3 -> floor from then on.
  const Objective obj{[](const Eigen::VectorXd& x) { return -x[0]; }, 1, 0.0, 0.0, Eigen::VectorXd::Zero(1)};
  RunTrace tr;
  const double xs[4] = {0.5, 0.01, 0.0, 0.2};
  for (int i = 0; i < 4; ++i) {
    tr.records.push_back(rec(i + 1, 0, 0));
    tr.records[i].x = Eigen::VectorXd::Constant(1, xs[i]);
  }
  const auto scored = compute_regret(tr, obj);
  const auto rows = summarize({scored});
  std::ostringstream out;
  emit_log_distance(out, rows);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "# t mean_log_dist stderr_log_dist");
  std::vector<double> vals, errs;
  for (std::int64_t t; in >> t;) {
    double v, e;
    in >> v >> e;
    vals.push_back(v);
    errs.push_back(e);
  }
  ASSERT_EQ(vals.size(), 4u);
  EXPECT_NEAR(vals[0], std::log10(0.5), 1e-12);
  EXPECT_NEAR(vals[1], -2.0, 1e-12);
  EXPECT_EQ(vals[2], -12.0);
  EXPECT_EQ(vals[3], -12.0);
  for (double e : errs) EXPECT_EQ(e, 0.0);

  RunTrace no_opt;
  no_opt.records.push_back(rec(1, 0, 0));
  no_opt.records[0].log_distance.reset();
  std::ostringstream sink;
  EXPECT_THROW(emit_log_distance(sink, summarize({no_opt})), std::invalid_argument);
}

TEST(RunExperiment, FileCountContractAndManifest) {
  const fs::path dir = scratch("files");
  const auto spec = small_spec(dir);
  const auto m = run_experiment(spec);
  EXPECT_TRUE(m.failures.empty());
  int traces = 0, summaries = 0, manifests = 0, plots = 0;
  for (const auto& f : m.files) {
    EXPECT_TRUE(fs::exists(dir / f.path)) << f.path;
    traces += f.kind == "trace";
    summaries += f.kind == "summary";
    manifests += f.kind == "manifest";
    plots += f.kind == "log_distance";
  }
  EXPECT_EQ(traces, 1);
  EXPECT_EQ(summaries, 1);
  EXPECT_EQ(manifests, 1);
  EXPECT_EQ(plots, 1);
  std::size_t on_disk = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++on_disk;
  EXPECT_EQ(on_disk, m.files.size());

  const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(j["config"]["benchmark"], "beale");
  EXPECT_EQ(j["config"]["budget_T"], "4");
  EXPECT_EQ(j["files"].size(), m.files.size());
  EXPECT_TRUE(j["failures"].empty());

  const std::string trace = slurp(dir / "trace_hubo_r000.csv");
  EXPECT_EQ(trace.substr(0, trace.find('\n')), "t,x,y,best_y,r_t,R_t,log_dist,side,n_cubes,wall_ms");
  EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 1 + 3 + 4);
  const std::string summary = slurp(dir / "summary_hubo.csv");
  EXPECT_EQ(summary.substr(0, summary.find('\n')),
            "t,mean_best_y,std_best_y,stderr_best_y,mean_log_dist,stderr_log_dist");
  EXPECT_EQ(exit_code(m), kExitOk);
}

TEST(RunExperiment, RerunIsByteIdenticalAcrossWorkerCounts) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  auto spec = small_spec(a);
  spec.algorithms = {"hubo", "hdhubo", "vol2", "random"};
  spec.repeats = 2;
  run_experiment(spec);
  spec.out = b.string();
  spec.workers = 3;
  run_experiment(spec);
  for (const auto& alg : spec.algorithms) {
    for (int r = 0; r < 2; ++r) {
      const auto name = trace_file_name(alg, r);
      EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
      EXPECT_FALSE(slurp(a / name).empty());
    }
  }
}

TEST(RunExperiment, SeedIsBasePlusRepeat) {
  const fs::path a = scratch("seed_a"), b = scratch("seed_b");
  auto spec = small_spec(a);
  spec.repeats = 2;
  spec.seed = 10;
  run_experiment(spec);
  spec.out = b.string();
  spec.seed = 11;
  spec.repeats = 1;
  run_experiment(spec);
  EXPECT_EQ(slurp(a / trace_file_name("hubo", 1)), slurp(b / trace_file_name("hubo", 0)));
}

TEST(RunExperiment, PartialFailureIsRecordedAndOthersContinue) {
  const fs::path dir = scratch("partial");
  auto spec = small_spec(dir);
  spec.repeats = 3;
  const auto m = run_experiment(spec, [&](const std::string& alg, int r) {
    if (r == 1) throw std::runtime_error("boom");
    return run_single(spec, alg, r);
  });
  ASSERT_EQ(m.failures.size(), 1u);
  EXPECT_EQ(m.failures[0].repeat, 1);
  EXPECT_EQ(m.failures[0].error, "boom");
  EXPECT_EQ(exit_code(m), kExitPartialFailure);
  EXPECT_GT(slurp(dir / trace_file_name("hubo", 2)).size(), 100u);
  const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(j["failures"].size(), 1u);
  EXPECT_EQ(j["failures"][0]["error"], "boom");
}

#ifdef HUBO_CLI
namespace {
int run_cli(const std::string& args) {
  const int status = std::system((std::string(HUBO_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}
}  // namespace

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "ok.cfg");
    f << "benchmark=beale\nbudget=2\nrepeats=1\nrestarts=2\nmax_evals=40\nout=" << (dir / "out").string() << "\n";
    std::ofstream g(dir / "bad.cfg");
    g << "benchmark=beale\nrepeats=0\n";
  }
  EXPECT_EQ(run_cli("run --config " + (dir / "ok.cfg").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "manifest.json"));
  EXPECT_EQ(run_cli("run --config " + (dir / "bad.cfg").string()), 2);
  EXPECT_EQ(run_cli("run --config " + (dir / "ok.cfg").string() + " --set alpha=0.5"), 2);
  EXPECT_EQ(run_cli("run --config " + (dir / "ok.cfg").string() + " --set repeats=0 --set repeats=1"), 0);
  EXPECT_EQ(run_cli("run --config " + (dir / "missing.cfg").string()), 2);
  EXPECT_EQ(run_cli("list-benchmarks"), 0);
  EXPECT_EQ(run_cli("frobnicate"), 2);
}
#endif
