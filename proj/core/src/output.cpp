#include "magphon/output.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <system_error>

#include "magphon/errors.hpp"

namespace magphon {

std::string format_number(double x) {
    if (x == 0.0) return "0";  // folds -0
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string metadata_header(const OutputMeta& meta) {
    std::string out;
    out += "# magphon output\n";
    out += "# command: " + meta.command + "\n";
    out += "# preset: " + meta.preset + "\n";
    out += "# config_hash: fnv1a64:" + meta.config_hash + "\n";
    out += "# units: " + meta.units + "\n";
    return out;
}

std::string csv_text(const OutputMeta& meta, std::span<const std::string_view> columns,
                     std::span<const double> values) {
    std::string out = metadata_header(meta);
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ',';
        out += columns[c];
    }
    out += '\n';
    const std::size_t n = columns.size();
    out.reserve(out.size() + values.size() * 14);
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += format_number(values[i]);
        out += (i % n == n - 1) ? '\n' : ',';
    }
    return out;
}

std::string_view data_section(std::string_view text) {
    std::size_t pos = 0;
    while (pos < text.size() && text[pos] == '#') {
        const std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) return {};
        pos = nl + 1;
    }
    return text.substr(pos);
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw ConfigError("cannot create directory " + path.parent_path().string() + ": " + ec.message(), "output");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open " + path.string() + " for writing", "output");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw ConfigError("failed writing " + path.string(), "output");
}

}  // namespace magphon
