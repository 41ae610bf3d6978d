#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "homsim/acquisition.hpp"
#include "homsim/analysis.hpp"

namespace homsim::cli {

/// Declarative experiment description: crystal and detector parameters,
/// the tau sweep, run statistics, and output options. Loadable from a
/// flat, versioned key=value config file; command-line flags override
/// file values. D (dvg_fs_per_mm) has no physically certified default and
/// must always be supplied.
struct ExperimentSpec {
  // crystal
  double crystal_length_mm = 0.5;
  std::optional<double> dvg_fs_per_mm;
  double pump_wavelength_nm = 351.1;

  // tau sweep (re-centered delays, fs)
  double tau_min_fs = -250.0;
  double tau_max_fs = 250.0;
  int tau_steps = 101;

  // acquisition
  double pair_rate_per_s = 1000.0;
  std::optional<double> duration_s;
  std::optional<std::uint64_t> pair_count;
  ExchangeSign sign = ExchangeSign::boson;
  double visibility = 1.0;
  double eta_a = 0.2;
  double eta_b = 0.2;
  std::optional<double> photon_energy_ev;  ///< default: hc/(2*pump wavelength)
  double energy_fwhm_ev = 0.25;
  double relax_window_us = 15.0;
  std::int64_t coincidence_window_ns = kDefaultWindowNs;
  std::uint64_t seed = 1;

  // output
  std::filesystem::path out_dir = "out";
  bool svg = false;

  static ExperimentSpec from_file(const std::filesystem::path& file);

  void validate() const;
  /// Lighter validation for analysis-side commands, which take the crystal
  /// and detector physics from event-file headers rather than the spec.
  void validate_analysis() const;
  CrystalConfig crystal() const;
  DetectorModel detector(char id) const;
  RunConfig run_config(double tau_fs, std::uint64_t run_seed) const;
  std::vector<double> tau_grid() const;
};

/// Flag-level overrides (only the values the user actually passed).
struct SpecOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> tau_min_fs, tau_max_fs;
  std::optional<int> tau_steps;
  std::optional<double> crystal_length_mm, dvg_fs_per_mm;
  std::optional<double> eta_a, eta_b, visibility;
  std::optional<double> pair_rate_per_s, duration_s;
  std::optional<std::uint64_t> pair_count;
  std::optional<std::int64_t> coincidence_window_ns;
  bool fermion = false;
  bool svg = false;

  void apply(ExperimentSpec& spec) const;
};

/// Writes the ideal-theory curve CSV (and optionally an SVG plot).
int cmd_theory(const ExperimentSpec& spec);

/// One Monte Carlo acquisition per tau point; each event file's name embeds
/// its tau and per-point seed, and files are written atomically.
int cmd_run(const ExperimentSpec& spec);

/// Classifies and estimates every event file, writes the estimated curve
/// CSV (optionally an SVG overlaying the ideal theory). Throws on the
/// first unreadable or corrupt file. Efficiencies default to each file's
/// header values (the simulation truth); explicit overrides replace them,
/// e.g. with a Klyshko calibration result.
int cmd_analyze(const ExperimentSpec& spec,
                const std::vector<std::filesystem::path>& event_files,
                std::optional<double> eta_a_override = {},
                std::optional<double> eta_b_override = {});

/// Klyshko-style absolute efficiency calibration from distinguishable-delay
/// event files (counts pooled across files).
int cmd_calibrate(const ExperimentSpec& spec,
                  const std::vector<std::filesystem::path>& event_files);

/// Fast built-in invariant battery; prints one PASS/FAIL line per check.
int cmd_selftest(const ExperimentSpec& spec);

/// Per-tau-point seed derivation used by cmd_run (documented so runs can
/// be reproduced point-by-point).
std::uint64_t run_point_seed(std::uint64_t base_seed, std::size_t point_index);

}  // namespace homsim::cli
