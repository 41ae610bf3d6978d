// homsim command-line driver: theory sweeps, Monte Carlo event generation,
// stream analysis, Klyshko calibration, and a built-in selftest.

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "homsim/experiment.hpp"

namespace {

using homsim::cli::ExperimentSpec;
using homsim::cli::SpecOverrides;

struct CommonArgs {
  std::optional<std::string> config;
  SpecOverrides overrides;
};

void add_common_flags(CLI::App& cmd, CommonArgs& args) {
  cmd.add_option("--config", args.config, "experiment config file (key = value)");
  cmd.add_option("--seed", args.overrides.seed, "run seed");
  cmd.add_option("--out", args.overrides.out_dir, "output directory");
  cmd.add_option("--tau-min", args.overrides.tau_min_fs, "sweep start (fs)");
  cmd.add_option("--tau-max", args.overrides.tau_max_fs, "sweep end (fs)");
  cmd.add_option("--tau-steps", args.overrides.tau_steps, "sweep points");
  cmd.add_option("--crystal-length", args.overrides.crystal_length_mm,
                 "crystal length (mm)");
  cmd.add_option("--dvg", args.overrides.dvg_fs_per_mm,
                 "inverse-group-velocity difference D (fs/mm)");
  cmd.add_option("--eta-a", args.overrides.eta_a, "detector A efficiency");
  cmd.add_option("--eta-b", args.overrides.eta_b, "detector B efficiency");
  cmd.add_option("--visibility", args.overrides.visibility,
                 "interference visibility in [0,1]");
  cmd.add_option("--pair-rate", args.overrides.pair_rate_per_s,
                 "pair rate at the beam splitter (pairs/s)");
  cmd.add_option("--pair-count", args.overrides.pair_count,
                 "pairs per run (exclusive with --duration)");
  cmd.add_option("--duration", args.overrides.duration_s,
                 "run duration in seconds (exclusive with --pair-count)");
  cmd.add_option("--window", args.overrides.coincidence_window_ns,
                 "cross-coincidence window (ns)");
  cmd.add_flag("--fermion", args.overrides.fermion,
               "fermionic exchange sign (bosonic by default)");
  cmd.add_flag("--svg", args.overrides.svg, "also emit SVG plots");
}

ExperimentSpec build_spec(const CommonArgs& args) {
  ExperimentSpec spec;
  if (args.config) spec = ExperimentSpec::from_file(*args.config);
  args.overrides.apply(spec);
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-photon interference simulator with photon-number-"
               "resolving detectors"};
  app.require_subcommand(1);

  CommonArgs theory_args, run_args, analyze_args, calibrate_args, self_args;
  std::vector<std::string> analyze_files, calibrate_files;

  CLI::App* theory = app.add_subcommand(
      "theory", "ideal coincidence curves P(2,0), P(0,2), P(1,1) vs delay");
  add_common_flags(*theory, theory_args);

  CLI::App* run = app.add_subcommand(
      "run", "Monte Carlo acquisition: one time-tagged event file per delay");
  add_common_flags(*run, run_args);

  CLI::App* analyze = app.add_subcommand(
      "analyze", "reconstruct the coincidence curves from event files");
  add_common_flags(*analyze, analyze_args);
  analyze->add_option("files", analyze_files, "event files")->required();

  CLI::App* calibrate = app.add_subcommand(
      "calibrate",
      "absolute detector-efficiency calibration from large-delay runs");
  add_common_flags(*calibrate, calibrate_args);
  calibrate->add_option("files", calibrate_files, "event files")->required();

  CLI::App* selftest =
      app.add_subcommand("selftest", "run the built-in invariant checks");
  add_common_flags(*selftest, self_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (theory->parsed()) return homsim::cli::cmd_theory(build_spec(theory_args));
    if (run->parsed()) return homsim::cli::cmd_run(build_spec(run_args));
    if (analyze->parsed()) {
      std::vector<std::filesystem::path> files(analyze_files.begin(),
                                               analyze_files.end());
      return homsim::cli::cmd_analyze(build_spec(analyze_args), files,
                                      analyze_args.overrides.eta_a,
                                      analyze_args.overrides.eta_b);
    }
    if (calibrate->parsed()) {
      std::vector<std::filesystem::path> files(calibrate_files.begin(),
                                               calibrate_files.end());
      return homsim::cli::cmd_calibrate(build_spec(calibrate_args), files);
    }
    if (selftest->parsed())
      return homsim::cli::cmd_selftest(build_spec(self_args));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
