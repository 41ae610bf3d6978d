#include "homsim/event_io.hpp"

#include <algorithm>
#include <array>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace homsim {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line_no) + ": " + what);
}

void expect_keys(const ordered_json& obj, std::initializer_list<const char*> allowed,
                 const char* where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known)
      throw std::runtime_error(std::string("unknown field \"") + item.key() +
                               "\" in " + where);
  }
}

ordered_json detector_to_json(const DetectorModel& d) {
  ordered_json j;
  j["eta"] = d.eta;
  j["photon_energy_ev"] = d.photon_energy_ev;
  j["energy_fwhm_ev"] = d.energy_fwhm_ev;
  j["relax_window_us"] = d.relax_window_us;
  j["id"] = std::string(1, d.id);
  return j;
}

DetectorModel detector_from_json(const ordered_json& j) {
  expect_keys(j, {"eta", "photon_energy_ev", "energy_fwhm_ev",
                  "relax_window_us", "id"},
              "detector");
  DetectorModel d;
  d.eta = j.at("eta").get<double>();
  d.photon_energy_ev = j.at("photon_energy_ev").get<double>();
  d.energy_fwhm_ev = j.at("energy_fwhm_ev").get<double>();
  d.relax_window_us = j.at("relax_window_us").get<double>();
  const auto id = j.at("id").get<std::string>();
  if (id.size() != 1) throw std::runtime_error("detector id must be one character");
  d.id = id[0];
  return d;
}

ordered_json config_to_json_obj(const RunConfig& c) {
  ordered_json j;
  j["pair_rate_per_s"] = c.pair_rate_per_s;
  if (c.duration_s) j["duration_s"] = *c.duration_s;
  if (c.pair_count) j["pair_count"] = *c.pair_count;
  j["tau_fs"] = c.tau_fs;
  j["crystal"] = {{"length_mm", c.crystal.length_mm},
                  {"dvg_fs_per_mm", c.crystal.dvg_fs_per_mm},
                  {"pump_wavelength_nm", c.crystal.pump_wavelength_nm}};
  j["exchange"] = c.sign == ExchangeSign::boson ? "boson" : "fermion";
  j["visibility"] = c.visibility;
  j["detector_a"] = detector_to_json(c.detector_a);
  j["detector_b"] = detector_to_json(c.detector_b);
  j["seed"] = c.seed;
  return j;
}

RunConfig config_from_json_obj(const ordered_json& j) {
  expect_keys(j,
              {"pair_rate_per_s", "duration_s", "pair_count", "tau_fs",
               "crystal", "exchange", "visibility", "detector_a", "detector_b",
               "seed"},
              "run config");
  RunConfig c;
  c.pair_rate_per_s = j.at("pair_rate_per_s").get<double>();
  if (j.contains("duration_s")) c.duration_s = j.at("duration_s").get<double>();
  if (j.contains("pair_count"))
    c.pair_count = j.at("pair_count").get<std::uint64_t>();
  c.tau_fs = j.at("tau_fs").get<double>();
  const auto& cr = j.at("crystal");
  expect_keys(cr, {"length_mm", "dvg_fs_per_mm", "pump_wavelength_nm"},
              "crystal");
  c.crystal.length_mm = cr.at("length_mm").get<double>();
  c.crystal.dvg_fs_per_mm = cr.at("dvg_fs_per_mm").get<double>();
  c.crystal.pump_wavelength_nm = cr.at("pump_wavelength_nm").get<double>();
  const auto ex = j.at("exchange").get<std::string>();
  if (ex == "boson")
    c.sign = ExchangeSign::boson;
  else if (ex == "fermion")
    c.sign = ExchangeSign::fermion;
  else
    throw std::runtime_error("exchange must be \"boson\" or \"fermion\"");
  c.visibility = j.at("visibility").get<double>();
  c.detector_a = detector_from_json(j.at("detector_a"));
  c.detector_b = detector_from_json(j.at("detector_b"));
  c.seed = j.at("seed").get<std::uint64_t>();
  c.validate();
  return c;
}

}  // namespace

std::string run_config_to_json(const RunConfig& config) {
  return config_to_json_obj(config).dump();
}

RunConfig run_config_from_json(const std::string& json_text) {
  return config_from_json_obj(ordered_json::parse(json_text));
}

void serialize(const EventStream& stream, std::ostream& out) {
  ordered_json header;
  header["version"] = kEventSchemaVersion;
  header["pairs_generated"] = stream.pairs_generated;
  header["config"] = config_to_json_obj(stream.config);
  out << kEventMagic << header.dump() << '\n';

  char buf[96];
  for (const EventRecord& e : stream.events) {
    std::snprintf(buf, sizeof(buf), "%" PRId64 "\t%c\t%.6f\t%d\n", e.t_ns,
                  e.det, e.energy_ev, e.n_inferred);
    out << buf;
  }
}

void serialize(const EventStream& stream, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + file.string());
  serialize(stream, out);
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

EventStream deserialize(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw std::runtime_error("empty event file");
  ++line_no;
  const std::string magic(kEventMagic);
  if (line.rfind(magic, 0) != 0)
    fail_line(line_no, "missing event-file header");

  ordered_json header;
  try {
    header = ordered_json::parse(line.substr(magic.size()));
  } catch (const std::exception& e) {
    fail_line(line_no, std::string("bad header: ") + e.what());
  }
  expect_keys(header, {"version", "pairs_generated", "config"}, "header");
  const int version = header.at("version").get<int>();
  if (version != kEventSchemaVersion)
    throw std::runtime_error("unsupported event schema version " +
                             std::to_string(version) + " (expected " +
                             std::to_string(kEventSchemaVersion) + ")");

  EventStream stream;
  stream.pairs_generated = header.at("pairs_generated").get<std::uint64_t>();
  stream.config = config_from_json_obj(header.at("config"));

  std::int64_t prev_t = -1;
  while (std::getline(in, line)) {
    ++line_no;

    if (std::count(line.begin(), line.end(), '\t') != 3)
      fail_line(line_no, "malformed record (want t_ns\\tdet\\tenergy_eV\\tn)");
    std::array<std::string, 4> field;
    std::size_t start = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      const std::size_t tab = line.find('\t', start);
      field[i] = line.substr(
          start, tab == std::string::npos ? std::string::npos : tab - start);
      start = tab + 1;
    }

    EventRecord e;
    try {
      std::size_t used = 0;
      e.t_ns = std::stoll(field[0], &used);
      if (used != field[0].size()) throw std::invalid_argument("t_ns");
      e.energy_ev = std::stod(field[2], &used);
      if (used != field[2].size()) throw std::invalid_argument("energy");
      e.n_inferred = std::stoi(field[3], &used);
      if (used != field[3].size()) throw std::invalid_argument("n");
    } catch (const std::exception&) {
      fail_line(line_no, "malformed record (want t_ns\\tdet\\tenergy_eV\\tn)");
    }
    if (e.t_ns < 0) fail_line(line_no, "negative timestamp");
    if (field[1] != "A" && field[1] != "B")
      fail_line(line_no, "detector must be A or B");
    if (!(e.energy_ev >= 0.0)) fail_line(line_no, "negative energy");
    if (e.n_inferred < 0) fail_line(line_no, "negative photon count");
    if (e.t_ns < prev_t) fail_line(line_no, "timestamps must be nondecreasing");
    prev_t = e.t_ns;
    e.det = field[1][0];
    stream.events.push_back(e);
  }
  return stream;
}

EventStream deserialize(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  try {
    return deserialize(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(file.string() + ": " + e.what());
  }
}

}  // namespace homsim
