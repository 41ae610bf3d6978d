#include "homsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "homsim/constants.hpp"
#include "homsim/event_io.hpp"
#include "homsim/svg.hpp"

namespace homsim::cli {

namespace {

constexpr int kConfigVersion = 1;

[[noreturn]] void fail_config(const std::filesystem::path& file,
                              std::size_t line_no, const std::string& what) {
  throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                           ": " + what);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v) {
  std::size_t used = 0;
  const double x = std::stod(v, &used);
  if (used != v.size()) throw std::invalid_argument(v);
  return x;
}

std::uint64_t parse_u64(const std::string& v) {
  std::size_t used = 0;
  const auto x = std::stoull(v, &used);
  if (used != v.size() || (!v.empty() && v[0] == '-'))
    throw std::invalid_argument(v);
  return x;
}

std::int64_t parse_i64(const std::string& v) {
  std::size_t used = 0;
  const auto x = std::stoll(v, &used);
  if (used != v.size()) throw std::invalid_argument(v);
  return x;
}

bool parse_bool(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw std::invalid_argument(v);
}

// write-through-temp-then-rename so partial runs never leave a torn file
void atomic_write(const std::filesystem::path& file,
                  const std::function<void(const std::filesystem::path&)>& writer) {
  const std::filesystem::path tmp = file.string() + ".tmp";
  writer(tmp);
  std::filesystem::rename(tmp, file);
}

}  // namespace

ExperimentSpec ExperimentSpec::from_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open config " + file.string());

  ExperimentSpec spec;
  bool saw_version = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail_config(file, line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      fail_config(file, line_no, "expected key = value");

    try {
      if (key == "config_version") {
        if (parse_i64(value) != kConfigVersion)
          fail_config(file, line_no,
                      "unsupported config_version " + value + " (expected " +
                          std::to_string(kConfigVersion) + ")");
        saw_version = true;
      } else if (key == "crystal_length_mm") {
        spec.crystal_length_mm = parse_double(value);
      } else if (key == "dvg_fs_per_mm") {
        spec.dvg_fs_per_mm = parse_double(value);
      } else if (key == "pump_wavelength_nm") {
        spec.pump_wavelength_nm = parse_double(value);
      } else if (key == "tau_min_fs") {
        spec.tau_min_fs = parse_double(value);
      } else if (key == "tau_max_fs") {
        spec.tau_max_fs = parse_double(value);
      } else if (key == "tau_steps") {
        spec.tau_steps = static_cast<int>(parse_i64(value));
      } else if (key == "pair_rate_per_s") {
        spec.pair_rate_per_s = parse_double(value);
      } else if (key == "duration_s") {
        spec.duration_s = parse_double(value);
      } else if (key == "pair_count") {
        spec.pair_count = parse_u64(value);
      } else if (key == "exchange") {
        if (value == "boson")
          spec.sign = ExchangeSign::boson;
        else if (value == "fermion")
          spec.sign = ExchangeSign::fermion;
        else
          fail_config(file, line_no, "exchange must be boson or fermion");
      } else if (key == "visibility") {
        spec.visibility = parse_double(value);
      } else if (key == "eta_a") {
        spec.eta_a = parse_double(value);
      } else if (key == "eta_b") {
        spec.eta_b = parse_double(value);
      } else if (key == "photon_energy_ev") {
        spec.photon_energy_ev = parse_double(value);
      } else if (key == "energy_fwhm_ev") {
        spec.energy_fwhm_ev = parse_double(value);
      } else if (key == "relax_window_us") {
        spec.relax_window_us = parse_double(value);
      } else if (key == "coincidence_window_ns") {
        spec.coincidence_window_ns = parse_i64(value);
      } else if (key == "seed") {
        spec.seed = parse_u64(value);
      } else if (key == "out_dir") {
        spec.out_dir = value;
      } else if (key == "svg") {
        spec.svg = parse_bool(value);
      } else {
        fail_config(file, line_no, "unknown key \"" + key + "\"");
      }
    } catch (const std::invalid_argument&) {
      fail_config(file, line_no, "bad value for " + key + ": \"" + value + "\"");
    } catch (const std::out_of_range&) {
      fail_config(file, line_no, "value out of range for " + key);
    }
  }
  if (!saw_version)
    throw std::runtime_error(file.string() + ": missing config_version");
  return spec;
}

void SpecOverrides::apply(ExperimentSpec& spec) const {
  if (seed) spec.seed = *seed;
  if (out_dir) spec.out_dir = *out_dir;
  if (tau_min_fs) spec.tau_min_fs = *tau_min_fs;
  if (tau_max_fs) spec.tau_max_fs = *tau_max_fs;
  if (tau_steps) spec.tau_steps = *tau_steps;
  if (crystal_length_mm) spec.crystal_length_mm = *crystal_length_mm;
  if (dvg_fs_per_mm) spec.dvg_fs_per_mm = *dvg_fs_per_mm;
  if (eta_a) spec.eta_a = *eta_a;
  if (eta_b) spec.eta_b = *eta_b;
  if (visibility) spec.visibility = *visibility;
  if (pair_rate_per_s) spec.pair_rate_per_s = *pair_rate_per_s;
  if (duration_s) spec.duration_s = *duration_s;
  if (pair_count) spec.pair_count = *pair_count;
  if (coincidence_window_ns)
    spec.coincidence_window_ns = *coincidence_window_ns;
  if (fermion) spec.sign = ExchangeSign::fermion;
  if (svg) spec.svg = true;
}

void ExperimentSpec::validate() const {
  if (!dvg_fs_per_mm)
    throw std::invalid_argument(
        "dvg_fs_per_mm is required (no certified default exists); set it in "
        "the config file or pass --dvg");
  crystal().validate();
  if (!(tau_min_fs < tau_max_fs))
    throw std::invalid_argument("tau_min_fs must be below tau_max_fs");
  if (tau_steps < 1) throw std::invalid_argument("tau_steps must be >= 1");
  if (duration_s && pair_count)
    throw std::invalid_argument(
        "duration_s and pair_count are mutually exclusive; set exactly one");
  if (coincidence_window_ns < 0)
    throw std::invalid_argument("coincidence window must be nonnegative");
  detector('A').validate();
  detector('B').validate();
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw std::invalid_argument("visibility must lie in [0, 1]");
}

void ExperimentSpec::validate_analysis() const {
  if (coincidence_window_ns < 0)
    throw std::invalid_argument("coincidence window must be nonnegative");
}

CrystalConfig ExperimentSpec::crystal() const {
  return CrystalConfig{crystal_length_mm, dvg_fs_per_mm.value_or(0.0),
                       pump_wavelength_nm};
}

DetectorModel ExperimentSpec::detector(char id) const {
  DetectorModel d;
  d.eta = id == 'A' ? eta_a : eta_b;
  // degenerate signal photons carry half the pump photon's energy
  d.photon_energy_ev = photon_energy_ev.value_or(
      ::homsim::photon_energy_ev(2.0 * pump_wavelength_nm));
  d.energy_fwhm_ev = energy_fwhm_ev;
  d.relax_window_us = relax_window_us;
  d.id = id;
  return d;
}

RunConfig ExperimentSpec::run_config(double tau_fs,
                                     std::uint64_t run_seed) const {
  RunConfig c;
  c.pair_rate_per_s = pair_rate_per_s;
  if (duration_s)
    c.duration_s = duration_s;
  else
    c.pair_count = pair_count.value_or(100000);
  c.tau_fs = tau_fs;
  c.crystal = crystal();
  c.sign = sign;
  c.visibility = visibility;
  c.detector_a = detector('A');
  c.detector_b = detector('B');
  c.seed = run_seed;
  return c;
}

std::vector<double> ExperimentSpec::tau_grid() const {
  std::vector<double> taus(tau_steps);
  if (tau_steps == 1) {
    taus[0] = 0.5 * (tau_min_fs + tau_max_fs);
    return taus;
  }
  const double step = (tau_max_fs - tau_min_fs) / (tau_steps - 1);
  for (int i = 0; i < tau_steps; ++i) taus[i] = tau_min_fs + i * step;
  return taus;
}

std::uint64_t run_point_seed(std::uint64_t base_seed, std::size_t point_index) {
  return derive_seed(base_seed, 0x52554E00ull + point_index);
}

int cmd_theory(const ExperimentSpec& spec) {
  spec.validate();
  std::filesystem::create_directories(spec.out_dir);
  const auto taus = spec.tau_grid();
  const InterferenceCurve curve =
      sweep(spec.crystal(), taus, spec.sign, spec.visibility);

  const auto csv = spec.out_dir / "theory.csv";
  atomic_write(csv, [&](const auto& p) { write_curve_csv(curve, p); });
  std::cout << "wrote " << csv.string() << " (" << curve.points.size()
            << " points)\n";

  if (spec.svg) {
    std::vector<double> x, y20, y02, y11;
    for (const auto& pt : curve.points) {
      x.push_back(pt.tau_fs);
      y20.push_back(pt.p20);
      y02.push_back(pt.p02);
      y11.push_back(pt.p11);
    }
    const auto plot = spec.out_dir / "theory.svg";
    atomic_write(plot, [&](const auto& p) {
      write_svg_plot(p, "coincidence probabilities vs delay", "tau (fs)",
                     "probability",
                     {{"P(2,0)", "#1f77b4", x, y20, {}, false},
                      {"P(0,2)", "#2ca02c", x, y02, {}, false},
                      {"P(1,1)", "#d62728", x, y11, {}, false}});
    });
    std::cout << "wrote " << plot.string() << "\n";
  }
  return 0;
}

namespace {

std::string event_file_name(double tau_fs, std::uint64_t seed) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "events_tau%+.3ffs_seed%llu.tsv", tau_fs,
                static_cast<unsigned long long>(seed));
  return buf;
}

}  // namespace

int cmd_run(const ExperimentSpec& spec) {
  spec.validate();
  std::filesystem::create_directories(spec.out_dir);
  const auto taus = spec.tau_grid();
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const std::uint64_t point_seed = run_point_seed(spec.seed, i);
    const RunConfig config = spec.run_config(taus[i], point_seed);
    const EventStream stream = generate(config);
    const auto file = spec.out_dir / event_file_name(taus[i], spec.seed);
    atomic_write(file, [&](const auto& p) { serialize(stream, p); });
    std::cout << "wrote " << file.string() << " (" << stream.events.size()
              << " events, " << stream.pairs_generated << " pairs)\n";
  }
  return 0;
}

int cmd_analyze(const ExperimentSpec& spec,
                const std::vector<std::filesystem::path>& event_files,
                std::optional<double> eta_a_override,
                std::optional<double> eta_b_override) {
  if (event_files.empty())
    throw std::invalid_argument("analyze needs at least one event file");
  spec.validate_analysis();
  std::filesystem::create_directories(spec.out_dir);

  std::vector<EstimatedPoint> points;
  std::optional<RunConfig> first_config;
  for (const auto& file : event_files) {
    const EventStream stream = deserialize(file);
    if (!first_config) first_config = stream.config;
    const CountsSummary summary =
        classify(stream, spec.coincidence_window_ns);
    const double ea = eta_a_override.value_or(stream.config.detector_a.eta);
    const double eb = eta_b_override.value_or(stream.config.detector_b.eta);
    points.push_back(estimate(summary, ea, eb, stream.config.tau_fs));
  }
  std::sort(points.begin(), points.end(),
            [](const EstimatedPoint& a, const EstimatedPoint& b) {
              return a.tau_fs < b.tau_fs;
            });

  const auto csv = spec.out_dir / "estimates.csv";
  atomic_write(csv, [&](const auto& p) { write_estimates_csv(points, p); });
  std::cout << "wrote " << csv.string() << " (" << points.size()
            << " points)\n";

  if (spec.svg && first_config && points.size() >= 2 &&
      points.front().tau_fs < points.back().tau_fs) {
    std::vector<double> x, y20, y11, e20, e11;
    for (const auto& pt : points) {
      x.push_back(pt.tau_fs);
      y20.push_back(pt.p20_hat);
      e20.push_back(pt.p20_err);
      y11.push_back(pt.p11_hat);
      e11.push_back(pt.p11_err);
    }
    // smooth ideal overlay across the data extent
    std::vector<double> tx(201), t20, t11;
    const double lo = x.front(), hi = x.back();
    for (int i = 0; i < 201; ++i)
      tx[i] = lo + (hi - lo) * i / 200.0;
    const InterferenceCurve theory =
        sweep(first_config->crystal, tx, first_config->sign,
              first_config->visibility);
    for (const auto& pt : theory.points) {
      t20.push_back(pt.p20);
      t11.push_back(pt.p11);
    }
    const auto plot = spec.out_dir / "estimates.svg";
    atomic_write(plot, [&](const auto& p) {
      write_svg_plot(p, "estimated vs ideal coincidence probabilities",
                     "tau (fs)", "probability",
                     {{"theory P(2,0)", "#9ecae1", tx, t20, {}, false},
                      {"theory P(1,1)", "#fcae91", tx, t11, {}, false},
                      {"P(2,0) est", "#1f77b4", x, y20, e20, true},
                      {"P(1,1) est", "#d62728", x, y11, e11, true}});
    });
    std::cout << "wrote " << plot.string() << "\n";
  }
  return 0;
}

int cmd_calibrate(const ExperimentSpec& spec,
                  const std::vector<std::filesystem::path>& event_files) {
  if (event_files.empty())
    throw std::invalid_argument("calibrate needs at least one event file");
  spec.validate_analysis();

  CountsSummary pooled;
  pooled.window_ns = spec.coincidence_window_ns;
  for (const auto& file : event_files) {
    const EventStream stream = deserialize(file);
    const CountsSummary s = classify(stream, spec.coincidence_window_ns);
    pooled.n_pairs_assumed += s.n_pairs_assumed;
    pooled.singles_a += s.singles_a;
    pooled.singles_b += s.singles_b;
    pooled.doubles_a += s.doubles_a;
    pooled.doubles_b += s.doubles_b;
    pooled.cross += s.cross;
  }
  const EtaEstimate eta = klyshko_eta(pooled);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "eta_a = %.6f\neta_b = %.6f\n", eta.eta_a,
                eta.eta_b);
  std::cout << buf;
  return 0;
}

int cmd_selftest(const ExperimentSpec& spec) {
  // selftest has its own fallback D so it runs without user physics
  ExperimentSpec s = spec;
  if (!s.dvg_fs_per_mm) s.dvg_fs_per_mm = 200.0;
  s.validate();
  const CrystalConfig crystal = s.crystal();
  const double width = std::abs(crystal.rect_width_fs());

  int failures = 0;
  auto report = [&failures](const char* name, bool ok, double value) {
    std::printf("[%s] %-38s %.3e\n", ok ? "PASS" : "FAIL", name, value);
    if (!ok) ++failures;
  };

  {  // complementarity across signs and visibilities
    std::vector<double> taus(21);
    for (int i = 0; i < 21; ++i) taus[i] = -2.0 * width + i * width / 5.0;
    double worst = 0.0;
    for (ExchangeSign sign : {ExchangeSign::boson, ExchangeSign::fermion})
      for (double v : {0.0, 0.5, 1.0})
        for (const auto& pt : sweep(crystal, taus, sign, v).points)
          worst = std::max(worst, std::abs(pt.p20 + pt.p02 + pt.p11 - 0.25));
    report("complementarity |sum - 1/4|", worst < 1e-9, worst);
  }
  {  // transform unitarity and round trip
    const auto state = sinc_state_function(crystal, GridSpec::default_for(crystal));
    const auto temporal = to_temporal(state);
    double worst = std::abs(temporal.norm_sum() - 1.0);
    const auto back = to_spectral(temporal);
    for (int i = 0; i < state.size(); ++i)
      worst = std::max(worst, std::abs(back.values()[i] - state.values()[i]));
    report("transform round trip", worst < 1e-9, worst);
  }
  {  // quadrature against the closed-form triangle
    std::vector<double> taus(41);
    for (int i = 0; i < 41; ++i) taus[i] = -2.0 * width + i * width / 10.0;
    double worst = 0.0;
    const auto curve = sweep(crystal, taus, ExchangeSign::boson, 1.0);
    for (const auto& pt : curve.points) {
      const auto oracle =
          triangle_oracle(crystal, Delay{pt.tau_fs}, ExchangeSign::boson);
      worst = std::max({worst, std::abs(pt.p20 - oracle.p20),
                        std::abs(pt.p11 - oracle.p11)});
    }
    report("triangle oracle agreement", worst < 2e-4, worst);
  }
  {  // deterministic replay
    const RunConfig config = s.run_config(0.0, s.seed);
    RunConfig small = config;
    small.pair_count = 2000;
    small.duration_s.reset();
    std::ostringstream a, b;
    serialize(generate(small), a);
    serialize(generate(small), b);
    const bool same = a.str() == b.str();
    report("deterministic replay", same, same ? 0.0 : 1.0);
  }
  {  // outcome table normalization
    const auto pt = interference_point(crystal, 0.0, ExchangeSign::boson, 1.0,
                                       GridSpec::default_for(crystal));
    const double total = OutcomeDistribution::from_point(pt).total();
    report("outcome table sums to 1", std::abs(total - 1.0) < 1e-12,
           std::abs(total - 1.0));
  }

  std::printf("%s\n", failures == 0 ? "selftest: all checks passed"
                                    : "selftest: FAILURES present");
  return failures == 0 ? 0 : 1;
}

}  // namespace homsim::cli
