#pragma once

// Named presets. Each carries the quoted source values it was built from so
// the registry can check itself.

#include <string>
#include <string_view>
#include <vector>

#include "magphon/config.hpp"

namespace magphon {

struct Citation {
    std::string key;      // settings key
    std::string quoted;   // value as quoted, e.g. "1GHz-16MHz"
    std::string source;   // "caption" or "text"
};

struct Preset {
    std::string name;
    std::string summary;
    Settings settings;
    std::vector<Citation> citations;
};

const std::vector<Preset>& preset_registry();

/// Throws ConfigError (field "preset") listing the known names.
const Preset& find_preset(std::string_view name);

struct CitationCheck {
    std::string preset;
    std::string key;
    std::string quoted;
    std::string actual;
    bool ok = false;
};

/// Compares every cited key of the preset with its quoted value (numbers to
/// 1e-12 relative, anything else as text).
std::vector<CitationCheck> verify_citations(const Preset& preset);

}  // namespace magphon
