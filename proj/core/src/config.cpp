#include "magphon/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>

#include "magphon/errors.hpp"
#include "magphon/output.hpp"
#include "magphon/presets.hpp"

namespace magphon {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) + " (expected " +
                          std::string(expected) + ")",
                      std::string(key));
}

double unit_factor(std::string_view unit) {
    struct Unit {
        std::string_view name;
        double factor;
    };
    static constexpr std::array<Unit, 11> units{{{"", 1.0},
                                                 {"Hz", 1.0},
                                                 {"kHz", 1e3},
                                                 {"MHz", 1e6},
                                                 {"GHz", 1e9},
                                                 {"THz", 1e12},
                                                 {"s", 1.0},
                                                 {"ms", 1e-3},
                                                 {"us", 1e-6},
                                                 {"ns", 1e-9},
                                                 {"gamma", 1.0}}};
    for (const auto& u : units) {
        if (u.name == unit) return u.factor;
    }
    return std::nan("");
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad_value(key, v, "true or false");
}

std::size_t parse_count(std::string_view key, std::string_view v) {
    std::size_t n = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), n);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) bad_value(key, v, "a non-negative integer");
    return n;
}

double parse_real(std::string_view key, std::string_view v) {
    try {
        return parse_quantity(v);
    } catch (const ConfigError&) {
        bad_value(key, v, "a number with an optional unit");
    }
}

std::vector<std::string_view> split_list(std::string_view v) {
    std::vector<std::string_view> out;
    while (true) {
        const std::size_t comma = v.find(',');
        out.push_back(trim(v.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

struct KeyDef {
    std::string_view key;
    std::function<void(Settings&, std::string_view)> set;
    std::function<std::string(const Settings&)> get;
};

template <class Access>
KeyDef real_key(std::string_view key, Access access) {
    return {key, [key, access](Settings& s, std::string_view v) { access(s) = parse_real(key, v); },
            [access](const Settings& s) { return format_number(access(s)); }};
}

template <class Access>
KeyDef count_key(std::string_view key, Access access) {
    return {key, [key, access](Settings& s, std::string_view v) { access(s) = parse_count(key, v); },
            [access](const Settings& s) { return std::to_string(access(s)); }};
}

template <class Access>
KeyDef bool_key(std::string_view key, Access access) {
    return {key, [key, access](Settings& s, std::string_view v) { access(s) = parse_bool(key, v); },
            [access](const Settings& s) { return std::string(access(s) ? "true" : "false"); }};
}

// Enumerations are stored by their canonical names.
template <class E, std::size_t N, class Access>
KeyDef enum_key(std::string_view key, std::array<std::pair<std::string_view, E>, N> names, Access access) {
    std::string expected;
    for (const auto& [n, e] : names) expected += (expected.empty() ? "" : ", ") + std::string(n);
    return {key,
            [key, names, access, expected](Settings& s, std::string_view v) {
                for (const auto& [n, e] : names) {
                    if (n == v) {
                        access(s) = e;
                        return;
                    }
                }
                bad_value(key, v, expected);
            },
            [names, access](const Settings& s) {
                const E value = access(s);
                for (const auto& [n, e] : names) {
                    if (e == value) return std::string(n);
                }
                return std::string("unknown");
            }};
}

void add_mode(std::vector<KeyDef>& keys, std::string_view prefix_storage[3], OscillatorMode SystemConfig::*mode) {
    keys.push_back(real_key(prefix_storage[0], [mode](auto& s) -> auto& { return (s.system.*mode).omega; }));
    keys.push_back(real_key(prefix_storage[1], [mode](auto& s) -> auto& { return (s.system.*mode).gamma; }));
    keys.push_back(
        real_key(prefix_storage[2], [mode](auto& s) -> auto& { return (s.system.*mode).gamma_ext; }));
}

void add_axis(std::vector<KeyDef>& keys, std::string_view names[3], GridAxis Settings::*axis) {
    keys.push_back(real_key(names[0], [axis](auto& s) -> auto& { return (s.*axis).min; }));
    keys.push_back(real_key(names[1], [axis](auto& s) -> auto& { return (s.*axis).max; }));
    keys.push_back(count_key(names[2], [axis](auto& s) -> auto& { return (s.*axis).count; }));
}

std::vector<KeyDef> build_keys() {
    std::vector<KeyDef> k;
    k.push_back(enum_key<Command, 6>("command",
                                     {{{"self-energy", Command::self_energy},
                                       {"coupling", Command::coupling},
                                       {"spectrum", Command::spectrum},
                                       {"surface", Command::surface},
                                       {"find-ep", Command::find_ep},
                                       {"encircle", Command::encircle}}},
                                     [](auto& s) -> auto& { return s.command; }));
    k.push_back(enum_key<UnitSystem, 2>("units", {{{"hz", UnitSystem::hertz}, {"gamma", UnitSystem::gamma}}},
                                        [](auto& s) -> auto& { return s.units; }));
    k.push_back(enum_key<ConjugationConvention, 2>(
        "conjugation",
        {{{"paper_literal", ConjugationConvention::paper_literal},
          {"hermitian_consistent", ConjugationConvention::hermitian_consistent}}},
        [](auto& s) -> auto& { return s.system.conjugation; }));
    k.push_back(enum_key<EvalFrequency, 3>("sigma_eval",
                                           {{{"omega_m", EvalFrequency::at_omega_m},
                                             {"omega_r", EvalFrequency::at_omega_r},
                                             {"midpoint", EvalFrequency::at_midpoint}}},
                                           [](auto& s) -> auto& { return s.system.sigma_eval; }));

    static std::string_view tm[3] = {"tm.omega", "tm.gamma", "tm.gamma_ext"};
    static std::string_view te[3] = {"te.omega", "te.gamma", "te.gamma_ext"};
    static std::string_view mg[3] = {"magnon.omega", "magnon.gamma", "magnon.gamma_ext"};
    static std::string_view ph[3] = {"phonon.omega", "phonon.gamma", "phonon.gamma_ext"};
    add_mode(k, tm, &SystemConfig::tm);
    add_mode(k, te, &SystemConfig::te);
    add_mode(k, mg, &SystemConfig::magnon);
    add_mode(k, ph, &SystemConfig::phonon);
    k.push_back(real_key("tm_drive.detuning", [](auto& s) -> auto& { return s.system.tm_drive.detuning; }));
    k.push_back(
        real_key("tm_drive.strength", [](auto& s) -> auto& { return s.system.tm_drive.effective_strength; }));
    k.push_back(real_key("te_drive.detuning", [](auto& s) -> auto& { return s.system.te_drive.detuning; }));
    k.push_back(
        real_key("te_drive.strength", [](auto& s) -> auto& { return s.system.te_drive.effective_strength; }));

    k.push_back({"self_energy.kinds",
                 [](Settings& s, std::string_view v) {
                     std::vector<SigmaKind> kinds;
                     for (const auto item : split_list(v)) {
                         try {
                             kinds.push_back(sigma_kind_from_string(item));
                         } catch (const ConfigError&) {
                             bad_value("self_energy.kinds", v, "a comma list of rr, mm, mr, rm");
                         }
                     }
                     s.sigma_kinds = std::move(kinds);
                 },
                 [](const Settings& s) {
                     std::string out;
                     for (const auto kind : s.sigma_kinds) out += (out.empty() ? "" : ",") + std::string(to_string(kind));
                     return out;
                 }});
    k.push_back(enum_key<SweepLayout, 2>("self_energy.layout",
                                         {{{"grid", SweepLayout::grid}, {"tied", SweepLayout::tied}}},
                                         [](auto& s) -> auto& { return s.layout; }));
    static std::string_view tm_axis[3] = {"self_energy.tm_min", "self_energy.tm_max", "self_energy.tm_count"};
    static std::string_view te_axis[3] = {"self_energy.te_min", "self_energy.te_max", "self_energy.te_count"};
    add_axis(k, tm_axis, &Settings::tm_axis);
    add_axis(k, te_axis, &Settings::te_axis);
    k.push_back({"self_energy.eval_freq",
                 [](Settings& s, std::string_view v) {
                     if (v == "default") {
                         s.sigma_eval_override.reset();
                     } else {
                         s.sigma_eval_override = parse_real("self_energy.eval_freq", v);
                     }
                 },
                 [](const Settings& s) {
                     return s.sigma_eval_override ? format_number(*s.sigma_eval_override) : std::string("default");
                 }});

    static std::string_view om_axis[3] = {"spectrum.omega_min", "spectrum.omega_max", "spectrum.omega_count"};
    static std::string_view de_axis[3] = {"spectrum.detuning_min", "spectrum.detuning_max",
                                          "spectrum.detuning_count"};
    add_axis(k, om_axis, &Settings::omega_axis);
    add_axis(k, de_axis, &Settings::detuning_axis);
    k.push_back(enum_key<SweptPump, 2>("spectrum.swept", {{{"te", SweptPump::te}, {"tm", SweptPump::tm}}},
                                       [](auto& s) -> auto& { return s.swept; }));
    k.push_back(bool_key("spectrum.matrix_json", [](auto& s) -> auto& { return s.spectrum_matrix_json; }));
    k.push_back(real_key("noise.unit_psd", [](auto& s) -> auto& { return s.noise.unit_psd; }));
    k.push_back({"noise.channels",
                 [](Settings& s, std::string_view v) {
                     std::array<bool, kNoiseChannelCount> on{};
                     for (const auto item : split_list(v)) {
                         bool found = false;
                         for (std::size_t c = 0; c < kNoiseChannelCount; ++c) {
                             if (item == to_string(static_cast<NoiseChannel>(c))) {
                                 on[c] = true;
                                 found = true;
                             }
                         }
                         if (!found) {
                             bad_value("noise.channels", v,
                                       "a comma list of phonon, phonon_conj, magnon, magnon_conj");
                         }
                     }
                     s.noise.channels = on;
                 },
                 [](const Settings& s) {
                     std::string out;
                     for (std::size_t c = 0; c < kNoiseChannelCount; ++c) {
                         if (s.noise.channels[c]) {
                             out += (out.empty() ? "" : ",") + std::string(to_string(static_cast<NoiseChannel>(c)));
                         }
                     }
                     return out;
                 }});

    k.push_back(bool_key("plane.tie_detunings", [](auto& s) -> auto& { return s.tie_detunings; }));
    static std::string_view p_axis[3] = {"plane.p_min", "plane.p_max", "plane.p_count"};
    static std::string_view d_axis[3] = {"plane.delta_min", "plane.delta_max", "plane.delta_count"};
    add_axis(k, p_axis, &Settings::p_axis);
    add_axis(k, d_axis, &Settings::delta_axis);
    k.push_back(count_key("ep.seeds_per_axis", [](auto& s) -> auto& { return s.ep_seeds_per_axis; }));
    k.push_back(real_key("surface.gap_tol", [](auto& s) -> auto& { return s.surface_gap_tol; }));

    k.push_back(real_key("loop.p_center", [](auto& s) -> auto& { return s.loop.p_center; }));
    k.push_back(real_key("loop.delta_center", [](auto& s) -> auto& { return s.loop.delta_center; }));
    k.push_back(real_key("loop.radius", [](auto& s) -> auto& { return s.loop.radius_units; }));
    k.push_back(real_key("loop.p_unit", [](auto& s) -> auto& { return s.loop.p_unit; }));
    k.push_back(real_key("loop.delta_unit", [](auto& s) -> auto& { return s.loop.delta_unit; }));
    k.push_back(enum_key<Direction, 2>("loop.direction", {{{"cw", Direction::cw}, {"ccw", Direction::ccw}}},
                                       [](auto& s) -> auto& { return s.loop.direction; }));
    k.push_back(real_key("loop.period", [](auto& s) -> auto& { return s.loop.period; }));
    k.push_back(real_key("loop.start_phase", [](auto& s) -> auto& { return s.loop.start_phase; }));
    k.push_back(count_key("loop.samples", [](auto& s) -> auto& { return s.loop.samples; }));
    k.push_back(enum_key<InitialMode, 3>(
        "loop.initial",
        {{{"a", InitialMode::a}, {"b", InitialMode::b}, {"longest_lived", InitialMode::longest_lived}}},
        [](auto& s) -> auto& { return s.initial; }));
    k.push_back(real_key("evolve.rel_tol", [](auto& s) -> auto& { return s.evolve.rel_tol; }));
    k.push_back(real_key("evolve.abs_tol", [](auto& s) -> auto& { return s.evolve.abs_tol; }));
    k.push_back(real_key("evolve.reference_frequency",
                         [](auto& s) -> auto& { return s.evolve.reference_frequency; }));
    k.push_back(enum_key<Alignment, 3>("chirality.alignment",
                                       {{{"half_period", Alignment::half_period},
                                         {"same_position", Alignment::same_position},
                                         {"index", Alignment::index}}},
                                       [](auto& s) -> auto& { return s.chirality.alignment; }));
    k.push_back(real_key("chirality.slope_threshold",
                         [](auto& s) -> auto& { return s.chirality.slope_threshold; }));
    return k;
}

const std::vector<KeyDef>& key_table() {
    static const std::vector<KeyDef> table = build_keys();
    return table;
}

const KeyDef& find_key(std::string_view key) {
    for (const auto& def : key_table()) {
        if (def.key == key) return def;
    }
    throw ConfigError("unknown configuration key '" + std::string(key) + "'", std::string(key));
}

}  // namespace

std::string_view to_string(Command c) {
    switch (c) {
        case Command::self_energy: return "self-energy";
        case Command::coupling: return "coupling";
        case Command::spectrum: return "spectrum";
        case Command::surface: return "surface";
        case Command::find_ep: return "find-ep";
        case Command::encircle: return "encircle";
    }
    return "unknown";
}

Command command_from_string(std::string_view name) {
    for (const Command c : {Command::self_energy, Command::coupling, Command::spectrum, Command::surface,
                            Command::find_ep, Command::encircle}) {
        if (to_string(c) == name) return c;
    }
    throw ConfigError("unknown command '" + std::string(name) +
                          "' (self-energy, coupling, spectrum, surface, find-ep, encircle)",
                      "command");
}

std::string_view to_string(UnitSystem u) { return u == UnitSystem::hertz ? "hz" : "gamma"; }

std::string_view unit_description(UnitSystem u) {
    if (u == UnitSystem::hertz) {
        return "frequencies, detunings, dampings and couplings in Hz with hbar = 1; drive strength a_in*g in Hz; "
               "time in s";
    }
    return "rates in units of the common damping gamma (= 1); drive strength a_in*g in units of gamma; "
           "self-energies in units of (g a_in)^2";
}

std::vector<double> GridAxis::values() const {
    std::vector<double> v(count);
    if (count == 0) return v;
    v[0] = min;
    if (count == 1) return v;
    const double span = max - min;
    const double denom = static_cast<double>(count - 1);
    for (std::size_t i = 1; i + 1 < count; ++i) v[i] = min + span * (static_cast<double>(i) / denom);
    v[count - 1] = max;
    return v;
}

void GridAxis::validate(std::string_view name) const {
    const std::string n(name);
    if (count == 0) throw ConfigError(n + ": grid needs at least one point", n + "_count");
    if (!std::isfinite(min) || !std::isfinite(max)) throw ConfigError(n + ": grid bounds must be finite", n + "_min");
    if (count > 1 && !(min < max)) throw ConfigError(n + ": grid needs min < max", n + "_max");
}

void Settings::validate() const {
    system.validate();
    switch (command) {
        case Command::coupling: break;
        case Command::self_energy:
            if (sigma_kinds.empty()) throw ConfigError("no self-energy kind selected", "self_energy.kinds");
            tm_axis.validate("self_energy.tm");
            if (layout == SweepLayout::grid) te_axis.validate("self_energy.te");
            if (sigma_eval_override && !std::isfinite(*sigma_eval_override)) {
                throw ConfigError("evaluation frequency must be finite", "self_energy.eval_freq");
            }
            break;
        case Command::spectrum:
            omega_axis.validate("spectrum.omega");
            detuning_axis.validate("spectrum.detuning");
            noise.validate();
            break;
        case Command::surface:
        case Command::find_ep:
            p_axis.validate("plane.p");
            delta_axis.validate("plane.delta");
            region().validate();
            if (ep_seeds_per_axis < 8) throw ConfigError("EP search needs at least 8 seeds per axis", "ep.seeds_per_axis");
            if (!(surface_gap_tol > 0.0)) throw ConfigError("gap tolerance must be positive", "surface.gap_tol");
            break;
        case Command::encircle:
            loop.validate();
            if (!(evolve.rel_tol > 0.0) || !(evolve.abs_tol > 0.0)) {
                throw ConfigError("integrator tolerances must be positive", "evolve.rel_tol");
            }
            if (!std::isfinite(evolve.reference_frequency)) {
                throw ConfigError("reference frequency must be finite", "evolve.reference_frequency");
            }
            if (!(chirality.slope_threshold > 0.0)) {
                throw ConfigError("slope threshold must be positive", "chirality.slope_threshold");
            }
            if (chirality.alignment == Alignment::half_period && (loop.samples - 1) % 2 != 0) {
                throw ConfigError("half-period alignment needs an odd sample count", "loop.samples");
            }
            break;
    }
}

double parse_quantity(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) throw ConfigError("empty quantity", "value");
    double total = 0.0;
    bool first = true;
    while (!s.empty()) {
        double sign = 1.0;
        if (s.front() == '+' || s.front() == '-') {
            sign = s.front() == '-' ? -1.0 : 1.0;
            s.remove_prefix(1);
            s = trim(s);
        } else if (!first) {
            throw ConfigError("malformed quantity '" + std::string(text) + "'", "value");
        }
        double x = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
        if (res.ec != std::errc{}) throw ConfigError("malformed quantity '" + std::string(text) + "'", "value");
        s.remove_prefix(static_cast<std::size_t>(res.ptr - s.data()));
        s = trim(s);
        std::size_t ulen = 0;
        while (ulen < s.size() && std::isalpha(static_cast<unsigned char>(s[ulen]))) ++ulen;
        const double f = unit_factor(s.substr(0, ulen));
        if (std::isnan(f)) throw ConfigError("unknown unit in '" + std::string(text) + "'", "value");
        s.remove_prefix(ulen);
        s = trim(s);
        total += sign * x * f;
        first = false;
    }
    if (!std::isfinite(total)) throw ConfigError("quantity '" + std::string(text) + "' is not finite", "value");
    return total;
}

std::span<const std::string_view> settings_keys() {
    static const std::vector<std::string_view> keys = [] {
        std::vector<std::string_view> out;
        for (const auto& def : key_table()) out.push_back(def.key);
        return out;
    }();
    return keys;
}

void set_setting(Settings& s, std::string_view key, std::string_view value) {
    find_key(key).set(s, trim(value));
}

std::string get_setting(const Settings& s, std::string_view key) { return find_key(key).get(s); }

std::string canonical_text(const Settings& s) {
    std::string out;
    for (const auto& def : key_table()) {
        out += def.key;
        out += " = ";
        out += def.get(s);
        out += '\n';
    }
    return out;
}

std::string config_hash(const Settings& s) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_text(s))));
    return buf;
}

Override parse_override(std::string_view text) {
    const std::size_t eq = text.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("override '" + std::string(text) + "' is not of the form key=value", "--set");
    }
    const auto key = trim(text.substr(0, eq));
    if (key.empty()) throw ConfigError("override '" + std::string(text) + "' has an empty key", "--set");
    return {std::string(key), std::string(trim(text.substr(eq + 1)))};
}

std::vector<ConfigEntry> read_config_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file " + path.string(), "--config");
    std::vector<ConfigEntry> out;
    std::string section;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(f, raw)) {
        ++line_no;
        std::string_view line(raw);
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError(where + ": malformed section header", "line " + std::to_string(line_no));
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(where + ": expected 'key = value'", "line " + std::to_string(line_no));
        }
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(where + ": empty key", "line " + std::to_string(line_no));
        std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
        out.push_back({std::move(full), std::string(trim(line.substr(eq + 1))), line_no});
    }
    return out;
}

void set_formats(RunSpec& spec, std::string_view list) {
    spec.csv = false;
    spec.json = false;
    for (const auto item : split_list(list)) {
        if (item == "csv") {
            spec.csv = true;
        } else if (item == "json") {
            spec.json = true;
        } else {
            throw ConfigError("unknown output format '" + std::string(item) + "' (csv, json)", "--format");
        }
    }
}

Settings load_config(const RunSpec& spec) {
    std::vector<ConfigEntry> entries;
    if (spec.config_path) entries = read_config_file(*spec.config_path);

    std::optional<std::string> preset = spec.preset;
    for (const auto& e : entries) {
        if (e.key != "preset") continue;
        if (preset && *preset != e.value) {
            throw ConfigError("config file line " + std::to_string(e.line) + " selects preset '" + e.value +
                                  "' but '" + *preset + "' was requested",
                              "preset");
        }
        preset = e.value;
    }

    Settings s = preset ? find_preset(*preset).settings : Settings{};
    if (preset) s.preset = *preset;
    for (const auto& e : entries) {
        if (e.key == "preset") continue;
        try {
            set_setting(s, e.key, e.value);
        } catch (const ConfigError& err) {
            throw ConfigError(spec.config_path->string() + ":" + std::to_string(e.line) + ": " + err.what(),
                              err.field());
        }
    }
    for (const auto& [key, value] : spec.overrides) set_setting(s, key, value);
    if (spec.command) s.command = *spec.command;
    s.validate();
    return s;
}

}  // namespace magphon
