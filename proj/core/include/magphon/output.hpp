#pragma once

// Serialization helpers shared by the run commands.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace magphon {

/// Shortest round-trip decimal text of x.
std::string format_number(double x);

std::uint64_t fnv1a64(std::string_view bytes);

/// Provenance echoed at the top of every output file.
struct OutputMeta {
    std::string command;
    std::string preset;  // "none" without a preset
    std::string config_hash;
    std::string units;
};

/// "# key: value" lines.
std::string metadata_header(const OutputMeta& meta);

/// Metadata header, then the column line, then one line per row of `values`
/// (row-major, columns.size() values per row).
std::string csv_text(const OutputMeta& meta, std::span<const std::string_view> columns,
                     std::span<const double> values);

/// Everything after the leading '#' lines of a CSV, or the whole text otherwise.
std::string_view data_section(std::string_view text);

/// Writes `content` to `path`, creating parent directories. Throws ConfigError
/// (field "output") when the file cannot be written.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace magphon
