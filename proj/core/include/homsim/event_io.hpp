#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "homsim/acquisition.hpp"

namespace homsim {

/// Event-file schema v1. One header line
///   #homsim-events {"version":1,"pairs_generated":N,"config":{...}}
/// followed by one record per line:
///   t_ns <TAB> det(A|B) <TAB> energy_eV (6 decimals) <TAB> n_inferred
/// UTF-8, LF line endings. Serialization of a generated stream is
/// byte-stable, so deserialize-then-serialize reproduces the file exactly.
inline constexpr int kEventSchemaVersion = 1;
inline constexpr const char* kEventMagic = "#homsim-events ";

void serialize(const EventStream& stream, std::ostream& out);
void serialize(const EventStream& stream, const std::filesystem::path& file);

/// Strict parser: unknown header fields, malformed or out-of-order records,
/// and schema-version mismatches are errors; messages carry the 1-based
/// line number (and file name for the path overload).
EventStream deserialize(std::istream& in);
EventStream deserialize(const std::filesystem::path& file);

/// Header serialization shared with the config tooling.
std::string run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const std::string& json_text);

}  // namespace homsim
