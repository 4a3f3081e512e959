// SPDX-License-Identifier: Apache-2.0

// Command-line front end: `sweep`, `trial` and `validate-config`.
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rissrf/config.hpp"
#include "rissrf/experiment.hpp"
#include "rissrf/records.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct SweepArgs {
  std::string config_path;
  std::string preset;
  std::string output_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  int workers = 0;
  bool resume = false;
  bool quiet = false;
};

struct TrialArgs {
  std::string config_path;
  int users = 2;
  int elements = 64;
  std::string bits = "4";
  std::uint64_t seed = 1;
  int index = 0;
  bool baseline = false;
  bool verbose = false;
  bool json = false;
};

rissrf::SimConfig base_config(const std::string& config_path, const std::string& preset_name) {
  if (!config_path.empty() && !preset_name.empty()) {
    throw rissrf::ConfigError("--preset", "cannot be combined with a config file");
  }
  if (!config_path.empty()) return rissrf::load_config(config_path);
  if (!preset_name.empty()) return rissrf::preset(preset_name);
  return rissrf::SimConfig{};
}

int run_sweep(const SweepArgs& args) {
  auto config = base_config(args.config_path, args.preset);
  if (args.seed) config.seed = *args.seed;
  if (args.trials) config.trials = *args.trials;
  config.validate();

  rissrf::SweepOptions options;
  options.workers = args.workers;
  options.output_dir = std::filesystem::path(args.output_dir);
  options.resume = args.resume;
  if (!args.quiet) {
    options.progress = [](std::size_t done, std::size_t total) {
      std::cerr << "\r[" << done << "/" << total << "] points" << std::flush;
      if (done == total) std::cerr << '\n';
    };
  }
  const auto data = rissrf::run_sweep(config, options);
  int failed = 0;
  for (const auto& s : data.summary) failed += s.failed;
  std::cerr << "wrote " << data.trials.size() << " trial rows and " << data.summary.size() << " summary rows to "
            << args.output_dir << " in " << data.seconds << " s";
  if (failed > 0) std::cerr << " (" << failed << " failed trials)";
  std::cerr << '\n';
  return 0;
}

int run_trial(const TrialArgs& args) {
  auto config = base_config(args.config_path, "");
  config.seed = args.seed;
  config.users = {args.users};
  config.elements = {args.elements};
  config.codebooks = {rissrf::codebook_from_string(args.bits)};
  if (args.baseline && !config.runs(rissrf::Scheme::MfDigital)) config.schemes.push_back(rissrf::Scheme::MfDigital);
  config.validate();

  rissrf::SurfaceCache surfaces(config);
  const auto outcome = rissrf::run_trial(config, args.users, args.elements, config.codebooks.front(), args.index,
                                         surfaces, args.verbose || args.json);

  std::cout << rissrf::trial_csv_header() << '\n' << rissrf::trial_csv_row(outcome.single_rf) << '\n';
  if (outcome.baseline) std::cout << rissrf::trial_csv_row(*outcome.baseline) << '\n';

  if (outcome.record && args.json) std::cerr << outcome.record->dump(2) << '\n';
  if (args.verbose) {
    const auto& r = outcome.single_rf;
    std::cerr << "trial seed " << r.trial_seed << ", D = " << r.distortion_db().value << " dB, PAPR = "
              << r.papr_db().value << " dB, P_out = " << r.p_out << '\n'
              << "solver: " << r.solver.solves << " solves, mean iterations " << r.solver.iterations_mean
              << ", converged fraction " << r.solver.converged_fraction << ", negative-gain events "
              << r.solver.negative_gain_events << ", objective evaluations " << r.solver.trace_length << '\n';
    if (outcome.record) {
      std::cerr << "spectral norm^2 of H~: " << (*outcome.record)["spectral_norm_sq"].get<double>() << '\n';
    }
  }
  return 0;
}

int validate_config(const std::string& path) {
  const auto config = rissrf::load_config(path);
  std::cout << "ok: " << rissrf::sweep_points(config).size() << " sweep points x " << config.trials << " trials\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reflecting-surface single-RF MIMO transmitter simulator"};
  app.require_subcommand(1);

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Run a Monte-Carlo sweep and write CSV + manifest");
  sweep->add_option("config", sweep_args.config_path, "JSON config file (or a previous manifest.json)")
      ->check(CLI::ExistingFile);
  sweep->add_option("--preset", sweep_args.preset, "Built-in preset")->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
  sweep->add_option("-o,--output", sweep_args.output_dir, "Output directory")->capture_default_str();
  sweep->add_option("--seed", sweep_args.seed, "Override the master seed");
  sweep->add_option("--trials", sweep_args.trials, "Override trials per point")->check(CLI::PositiveNumber);
  sweep->add_option("--workers", sweep_args.workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  sweep->add_flag("--resume", sweep_args.resume, "Reuse completed trials found in the output directory");
  sweep->add_flag("-q,--quiet", sweep_args.quiet, "Suppress progress output");

  TrialArgs trial_args;
  auto* trial = app.add_subcommand("trial", "Run a single trial and print its CSV rows");
  trial->add_option("--config", trial_args.config_path, "JSON config supplying non-sweep parameters")
      ->check(CLI::ExistingFile);
  trial->add_option("-K,--users", trial_args.users, "Number of users")->check(CLI::PositiveNumber);
  trial->add_option("-M,--elements", trial_args.elements, "Number of surface elements (perfect square)")
      ->check(CLI::PositiveNumber);
  trial->add_option("-B,--bits", trial_args.bits, "Phase resolution in bits, or 'inf'")->capture_default_str();
  trial->add_option("--seed", trial_args.seed, "Master seed")->capture_default_str();
  trial->add_option("--index", trial_args.index, "Trial index")->check(CLI::NonNegativeNumber);
  trial->add_flag("--baseline", trial_args.baseline, "Also run the power-matched digital MF baseline");
  trial->add_flag("-v,--verbose", trial_args.verbose, "Print solver diagnostics to stderr");
  trial->add_flag("--json", trial_args.json, "Print the full trial record as JSON to stderr");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate-config", "Check a JSON config file");
  validate->add_option("config", validate_path, "JSON config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sweep->parsed()) return run_sweep(sweep_args);
    if (trial->parsed()) return run_trial(trial_args);
    if (validate->parsed()) return validate_config(validate_path);
  } catch (const rissrf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
