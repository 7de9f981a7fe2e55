#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "socon/config.hpp"
#include "socon/harness.hpp"
#include "socon/verify.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> max_iters;
  std::optional<double> alpha;
  bool timing = false;
  bool parallel = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("config", f.config, "Experiment config (TOML)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Override the RNG seed");
  cmd->add_option("--out-dir", f.out_dir, "Output directory (default $SOCON_OUT_DIR/<name> or out/<name>)");
  cmd->add_option("--max-iters", f.max_iters, "Override protocol.max_iters")->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", f.alpha, "Override protocol.alpha")->check(CLI::PositiveNumber);
  cmd->add_flag("--timing", f.timing, "Write per-round wall time into the trace");
  cmd->add_flag("--parallel", f.parallel, "Run agent phases with OpenMP");
}

socon::ExperimentConfig load(const CommonFlags& f) {
  socon::ExperimentConfig cfg = socon::load_experiment(f.config);
  socon::Overrides o;
  o.seed = f.seed;
  if (f.out_dir) o.out_dir = *f.out_dir;
  o.max_iters = f.max_iters;
  o.alpha = f.alpha;
  if (f.timing) o.timing = true;
  if (f.parallel) o.execution = socon::Execution::parallel;
  socon::apply_overrides(cfg, o);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed optimization over the convex hull of SO(n)"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Run one experiment; writes trace.csv and summary.json");
  add_common(run_cmd, run_flags);

  CommonFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep; writes sweep.csv and sweep_summary.json");
  add_common(sweep_cmd, sweep_flags);

  socon::VerifyOptions verify_opts;
  auto* verify_cmd = app.add_subcommand("verify", "Property checks; one JSON line per check");
  verify_cmd->add_option("--samples", verify_opts.samples, "Samples per randomized check")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify_opts.seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const socon::ExperimentConfig cfg = load(run_flags);
      const socon::RunSummary s = socon::run_experiment(cfg);
      std::cout << socon::summary_json(s) << '\n';
      std::cerr << "wrote " << socon::resolve_out_dir(cfg).string() << '\n';
      return socon::exit_code(s.termination);
    }
    if (*sweep_cmd) {
      const socon::ExperimentConfig cfg = load(sweep_flags);
      if (!cfg.sweep) {
        std::cerr << "error: " << sweep_flags.config << " has no [sweep] section\n";
        return 1;
      }
      const auto rows = socon::run_sweep(cfg);
      const auto medians = socon::median_errors(cfg, rows);
      for (std::size_t k = 0; k < medians.size(); ++k) {
        std::cout << cfg.sweep->values[k] << ' ' << medians[k] << '\n';
      }
      std::cerr << "wrote " << socon::resolve_out_dir(cfg).string() << '\n';
      return 0;
    }
    if (*verify_cmd) {
      const auto results = socon::verify_suite(verify_opts);
      std::cout << socon::verify_report(results);
      for (const auto& r : results)
        if (!r.passed) return 1;
      return 0;
    }
  } catch (const socon::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
