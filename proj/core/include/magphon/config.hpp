#pragma once

// Run configuration: the settings bundle every command reads, its flat
// key = value schema, the config-file reader and the command-line run spec.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "magphon/core_model.hpp"
#include "magphon/encircle.hpp"
#include "magphon/ep_spectral.hpp"
#include "magphon/noise_spectrum.hpp"
#include "magphon/self_energy.hpp"

namespace magphon {

enum class Command { self_energy, coupling, spectrum, surface, find_ep, encircle };

std::string_view to_string(Command c);
Command command_from_string(std::string_view name);

/// Evenly spaced grid with exact endpoints; count == 1 yields {min}.
struct GridAxis {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 1;

    std::vector<double> values() const;
    void validate(std::string_view name) const;
};

enum class UnitSystem { hertz, gamma };

std::string_view to_string(UnitSystem u);
/// Human-readable statement of the unit convention, echoed into every output header.
std::string_view unit_description(UnitSystem u);

struct Settings {
    std::string preset = "none";  // provenance only; not part of the key table
    Command command = Command::coupling;
    UnitSystem units = UnitSystem::hertz;
    SystemConfig system;

    // self-energy
    std::vector<SigmaKind> sigma_kinds{SigmaKind::mm};
    SweepLayout layout = SweepLayout::tied;
    GridAxis tm_axis{-5.0, 5.0, 101};
    GridAxis te_axis{-5.0, 5.0, 101};
    std::optional<double> sigma_eval_override;

    // spectrum
    GridAxis omega_axis{0.0, 1.0, 2};
    GridAxis detuning_axis{0.0, 0.0, 1};
    SweptPump swept = SweptPump::te;
    NoiseParams noise = NoiseParams::paper_mode();
    bool spectrum_matrix_json = false;

    // (P_in, Delta) plane: surface grid and EP search window
    bool tie_detunings = false;
    GridAxis p_axis{0.0, 1.0, 2};
    GridAxis delta_axis{-1.0, 1.0, 2};
    std::size_t ep_seeds_per_axis = 16;
    double surface_gap_tol = 1e-3;

    // encircling
    LoopSpec loop;
    InitialMode initial = InitialMode::longest_lived;
    EvolveOptions evolve;
    ChiralityOptions chirality;

    ParameterPlane plane() const { return {system, tie_detunings}; }
    Region region() const { return {p_axis.min, p_axis.max, delta_axis.min, delta_axis.max}; }

    /// Validates everything the configured command reads.
    void validate() const;
};

/// Parses a number optionally followed by a unit (Hz, kHz, MHz, GHz, THz,
/// us, ms, s, gamma), and sums or differences of such terms: "1GHz-16MHz".
double parse_quantity(std::string_view text);

/// Every settable key, in canonical order.
std::span<const std::string_view> settings_keys();

/// Assigns one key. Throws ConfigError naming the key on unknown keys or bad values.
void set_setting(Settings& s, std::string_view key, std::string_view value);

/// Canonical text of one key.
std::string get_setting(const Settings& s, std::string_view key);

/// "key = value" lines for every key in canonical order.
std::string canonical_text(const Settings& s);

/// FNV-1a 64-bit hash of canonical_text, as 16 hex digits.
std::string config_hash(const Settings& s);

using Override = std::pair<std::string, std::string>;

/// Splits "key=value". Throws ConfigError when there is no '='.
Override parse_override(std::string_view text);

struct ConfigEntry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

/// Reads key = value lines ('#' comments, optional [section] prefixes) and
/// returns them in file order. Parse errors name the line.
std::vector<ConfigEntry> read_config_file(const std::filesystem::path& path);

enum class OutputFormat { csv, json };

struct RunSpec {
    std::optional<Command> command;  // falls back to the preset's command
    std::optional<std::string> preset;
    std::optional<std::filesystem::path> config_path;
    std::vector<Override> overrides;
    std::filesystem::path output = ".";
    unsigned jobs = 1;
    bool csv = true;
    bool json = true;
};

/// Parses "csv", "json" or "csv,json" into the flags of `spec`.
void set_formats(RunSpec& spec, std::string_view list);

/// Starts from the preset (a "preset" key in the file counts too, and must
/// agree with spec.preset), applies the file, then the overrides, then the
/// command, and validates.
Settings load_config(const RunSpec& spec);

}  // namespace magphon
