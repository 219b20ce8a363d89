// hubo: run experiments, numerical diagnostics, list benchmarks.
//
//   hubo run --config exp.cfg [--set key=value]...
//   hubo diagnostics --out dir
//   hubo list-benchmarks

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hubo/benchmarks.hpp"
#include "hubo/diagnostics.hpp"
#include "hubo/experiment.hpp"

namespace {

constexpr int kOk = hubo::kExitOk;
constexpr int kConfigError = hubo::kExitConfigError;

int cmd_run(const std::string& config, const std::vector<std::string>& overrides) {
  hubo::ExperimentSpec spec;
  try {
    spec = hubo::load_spec(config, overrides);
    spec.validate();
  } catch (const hubo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  for (const auto& w : spec.warnings()) std::cerr << "warning: " << w << "\n";
  const auto manifest = hubo::run_experiment(spec);
  std::cout << "wrote " << manifest.files.size() << " files to " << manifest.directory.string() << "\n";
  for (const auto& f : manifest.failures) {
    std::cerr << "run failed: " << f.algorithm << " repeat " << f.repeat << ": " << f.error << "\n";
  }
  return hubo::exit_code(manifest);
}

int cmd_diagnostics(const std::string& out) {
  const auto checks = hubo::diagnostics(out);
  hubo::write_report(std::cout, checks);
  return kOk;
}

int cmd_list() {
  for (const auto& name : hubo::benchmark_names()) {
    const bool any_dim = name == "ackley" || name == "levy";
    const auto f = hubo::make_benchmark(name, any_dim ? std::optional<int>(2) : std::nullopt);
    std::printf("%-10s d=%-4s domain=[%g, %g]^d optimum=%.10g\n", name.c_str(),
                any_dim ? "any" : std::to_string(f.dim).c_str(), f.domain.lower[0], f.domain.upper[0],
                f.optimum_value);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian optimisation over expanding search spaces"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "run an experiment described by a key=value config file");
  run->add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("--set", overrides, "override a config key (key=value); repeatable, later wins")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  std::string out_dir;
  auto* diag = app.add_subcommand("diagnostics", "check series bounds, geometry and distance bounds");
  diag->add_option("--out", out_dir, "report directory")->required();

  auto* list = app.add_subcommand("list-benchmarks", "list the built-in test functions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(config, overrides);
    if (*diag) return cmd_diagnostics(out_dir);
    if (*list) return cmd_list();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
