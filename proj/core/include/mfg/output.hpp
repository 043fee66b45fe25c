#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mfg/config.hpp"
#include "mfg/diagnostics.hpp"
#include "mfg/run_record.hpp"

namespace mfg {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

/// Reads a sectioned `key = value` file. Missing keys take the defaults of
/// MfgConfig; unknown sections or keys are rejected. When [diagnostics].checks
/// is absent, every check applicable to the grid dimension is enabled.
/// Throws ConfigError naming `[section].key`.
MfgConfig parse_config(const std::filesystem::path& path);
MfgConfig parse_config_string(const std::string& text);

/// Canonical form: every key, fixed order, round-trip numbers.
std::string serialize_config(const MfgConfig& config);

/// FNV-1a 64 of the canonical serialization.
std::uint64_t config_hash(const MfgConfig& config);

std::string series_csv(const RunRecord& record);
std::string snapshot_csv(const RunRecord::Snapshot& snapshot);
std::string snapshot_file_name(double t);

/// Node coordinates followed by one column per named field.
std::string fields_csv(const std::vector<std::string>& names, const std::vector<const ScalarField*>& fields);

std::string report_text(const Report& report);

/// Writes `text` to `path`, creating parent directories. Throws Error on I/O failure.
void write_text(const std::filesystem::path& path, const std::string& text);

/// series.csv plus one snapshot file per recorded snapshot.
void write_record(const std::filesystem::path& dir, const RunRecord& record);

}  // namespace mfg
