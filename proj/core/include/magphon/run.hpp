#pragma once

// Command execution: turns a validated Settings bundle into files on disk.

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "magphon/config.hpp"

namespace magphon {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericError = 3;

/// Runs settings.command and writes its artifacts into spec.output (CSV grids
/// and/or JSON reports per spec.csv / spec.json, plus resolved_config.txt).
/// Returns the written paths. Throws ConfigError or NumericError.
std::vector<std::filesystem::path> execute(const Settings& settings, const RunSpec& spec);

/// One-line JSON error record: {"error": {"kind", "message", "field"}}.
void write_error_record(std::ostream& err, std::string_view kind, std::string_view message,
                        std::string_view field);

/// load_config + execute. On failure writes one JSON error record line to
/// `err` and returns kExitConfigError or kExitNumericError.
int run(const RunSpec& spec, std::ostream& err);

}  // namespace magphon
