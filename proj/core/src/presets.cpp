#include "magphon/presets.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "magphon/errors.hpp"

namespace magphon {

namespace {

struct Builder {
    Preset p;

    Builder(std::string name, std::string summary, const Settings& base) {
        p.name = std::move(name);
        p.summary = std::move(summary);
        p.settings = base;
    }

    // Assigns through the key table so the citation and the value cannot drift.
    Builder& cite(std::string_view key, std::string quoted, std::string source) {
        set_setting(p.settings, key, quoted);
        p.citations.push_back({std::string(key), std::move(quoted), std::move(source)});
        return *this;
    }
    Builder& set(std::string_view key, std::string_view value) {
        set_setting(p.settings, key, value);
        return *this;
    }
    Preset done() { return std::move(p); }
};

Settings unit_gamma_base() {
    Settings s;
    s.units = UnitSystem::gamma;
    s.command = Command::self_energy;
    s.system.tm = {ModeLabel::tm_photon, 0.0, 1.0, 0.5};
    s.system.te = {ModeLabel::te_photon, 0.0, 1.0, 0.5};
    s.system.magnon = {ModeLabel::magnon, 0.4, 1.0, 0.0};
    s.system.phonon = {ModeLabel::phonon, 0.4, 1.0, 0.0};
    s.system.tm_drive = {ModeLabel::tm_photon, 0.0, 1.0};
    s.system.te_drive = {ModeLabel::te_photon, 0.0, 1.0};
    s.tm_axis = {-5.0, 5.0, 201};
    s.te_axis = {-5.0, 5.0, 201};
    return s;
}

Builder fig2_family(std::string name, std::string summary) {
    Builder b(std::move(name), std::move(summary), unit_gamma_base());
    b.cite("phonon.omega", "0.4gamma", "text")
        .cite("magnon.omega", "0.4gamma", "text")
        .cite("tm.gamma", "1gamma", "text")
        .cite("te.gamma", "1gamma", "text")
        .cite("magnon.gamma", "1gamma", "text")
        .cite("phonon.gamma", "1gamma", "text")
        .cite("tm.gamma_ext", "0.5gamma", "text")
        .cite("te.gamma_ext", "0.5gamma", "text");
    return b;
}

Settings hertz_base(double omega_m, double omega_r) {
    Settings s;
    s.units = UnitSystem::hertz;
    s.system.tm = {ModeLabel::tm_photon, 0.0, 2e7, 1e7};
    s.system.te = {ModeLabel::te_photon, 0.0, 2e7, 1e7};
    s.system.magnon = {ModeLabel::magnon, omega_m, 2e7, 0.0};
    s.system.phonon = {ModeLabel::phonon, omega_r, 2e7, 0.0};
    return s;
}

Builder damping_citations(Builder b, const char* source) {
    b.cite("tm.gamma", "20MHz", source)
        .cite("te.gamma", "20MHz", source)
        .cite("magnon.gamma", "20MHz", source)
        .cite("phonon.gamma", "20MHz", source);
    return b;
}

Builder fig4_panel(std::string name, std::string summary, const char* strength, SweptPump swept,
                   const char* fixed_detuning) {
    Settings s = hertz_base(0.85e9, 1.15e9);
    s.command = Command::spectrum;
    s.omega_axis = {0.7e9, 1.3e9, 300};
    s.detuning_axis = {-30e6, 30e6, 200};
    s.swept = swept;
    s.noise = NoiseParams::paper_mode();
    Builder b = damping_citations(Builder(std::move(name), std::move(summary), s), "text");
    b.cite("magnon.omega", "1GHz-150MHz", "text")
        .cite("phonon.omega", "1GHz+150MHz", "text")
        .cite("tm_drive.strength", strength, "caption")
        .cite("te_drive.strength", strength, "caption")
        .cite(swept == SweptPump::te ? "tm_drive.detuning" : "te_drive.detuning", fixed_detuning, "caption");
    return b;
}

Settings plane_base() {
    Settings s = hertz_base(0.984e9, 1.016e9);
    s.command = Command::surface;
    s.system.tm_drive = {ModeLabel::tm_photon, -3e6, 0.87e12};
    s.system.te_drive = {ModeLabel::te_photon, 0.0, 0.87e12};
    s.p_axis = {0.2e12, 2.0e12, 181};
    s.delta_axis = {-60e6, 60e6, 121};
    s.ep_seeds_per_axis = 16;
    s.loop.p_center = 0.87e12;
    s.loop.delta_center = -5.5e6;
    return s;
}

Builder plane_citations(Builder b) {
    b = damping_citations(std::move(b), "caption");
    b.cite("magnon.omega", "1GHz-16MHz", "caption")
        .cite("phonon.omega", "1GHz+16MHz", "caption")
        .cite("tm_drive.detuning", "-3MHz", "caption");
    return b;
}

Builder fig6_panel(std::string name, std::string summary, const char* center, Direction dir) {
    Settings s = plane_base();
    s.command = Command::encircle;
    s.loop.direction = dir;
    s.loop.period = 1e-4;
    s.loop.samples = 513;
    Builder b = plane_citations(Builder(std::move(name), std::move(summary), s));
    b.cite("loop.p_center", "0.87THz", "caption")
        .cite("loop.delta_center", center, "caption")
        .cite("loop.radius", "1", "caption")
        .cite("loop.p_unit", "0.1THz", "caption")
        .cite("loop.delta_unit", "1MHz", "caption");
    return b;
}

std::vector<Preset> build_registry() {
    std::vector<Preset> r;
    r.push_back(fig2_family("fig2a", "phonon self-energy vs common pump detuning (monochromatic drive)")
                    .set("self_energy.kinds", "rr")
                    .set("self_energy.layout", "tied")
                    .done());
    r.push_back(fig2_family("fig2b", "magnon self-energy vs common pump detuning (monochromatic drive)")
                    .set("self_energy.kinds", "mm")
                    .set("self_energy.layout", "tied")
                    .done());
    r.push_back(fig2_family("fig2c", "magnon frequency shift over independent TM and TE detunings")
                    .set("self_energy.kinds", "mm")
                    .set("self_energy.layout", "grid")
                    .set("self_energy.tm_count", "101")
                    .set("self_energy.te_count", "101")
                    .done());
    r.push_back(fig2_family("fig2d", "magnon damping shift over independent TM and TE detunings")
                    .set("self_energy.kinds", "mm")
                    .set("self_energy.layout", "grid")
                    .set("self_energy.tm_count", "101")
                    .set("self_energy.te_count", "101")
                    .done());
    r.push_back(fig2_family("fig3", "mediated couplings Sigma_mr and Sigma_rm over TM and TE detunings")
                    .set("self_energy.kinds", "mr,rm")
                    .set("self_energy.layout", "grid")
                    .set("self_energy.tm_count", "101")
                    .set("self_energy.te_count", "101")
                    .done());

    r.push_back(fig4_panel("fig4a", "TE-sweep spectrum, weak drive, TM on resonance", "0.6THz", SweptPump::te, "0Hz")
                    .done());
    r.push_back(fig4_panel("fig4b", "TE-sweep spectrum, strong drive, TM on resonance", "3.6THz", SweptPump::te, "0Hz")
                    .done());
    r.push_back(fig4_panel("fig4c", "TE-sweep spectrum, strong drive, TM detuned", "3.6THz", SweptPump::te, "-3MHz")
                    .done());
    r.push_back(fig4_panel("fig4d", "TM-sweep spectrum, weak drive, TE on resonance", "0.6THz", SweptPump::tm, "0Hz")
                    .done());
    r.push_back(fig4_panel("fig4e", "TM-sweep spectrum, strong drive, TE on resonance", "3.6THz", SweptPump::tm, "0Hz")
                    .done());
    r.push_back(fig4_panel("fig4f", "TM-sweep spectrum, strong drive, TE detuned", "3.6THz", SweptPump::tm, "-3MHz")
                    .done());

    r.push_back(plane_citations(Builder("fig5", "eigenvalue surfaces and EPs over (P_in, TE detuning)", plane_base()))
                    .done());
    r.push_back(plane_citations(Builder("fig5tied",
                                        "eigenvalue surfaces with the TM detuning tied to the TE detuning",
                                        plane_base()))
                    .set("plane.tie_detunings", "true")
                    .done());

    r.push_back(fig6_panel("fig6a", "EP-free loop, clockwise", "-5.5MHz", Direction::cw).done());
    r.push_back(fig6_panel("fig6b", "EP-free loop, counter-clockwise", "-5.5MHz", Direction::ccw).done());
    r.push_back(fig6_panel("fig6c", "EP-enclosing loop, clockwise", "-4.5MHz", Direction::cw).done());
    r.push_back(fig6_panel("fig6d", "EP-enclosing loop, counter-clockwise", "-4.5MHz", Direction::ccw).done());
    return r;
}

}  // namespace

const std::vector<Preset>& preset_registry() {
    static const std::vector<Preset> registry = build_registry();
    return registry;
}

const Preset& find_preset(std::string_view name) {
    for (const auto& p : preset_registry()) {
        if (p.name == name) return p;
    }
    std::string known;
    for (const auto& p : preset_registry()) known += (known.empty() ? "" : ", ") + p.name;
    throw ConfigError("unknown preset '" + std::string(name) + "' (" + known + ")", "preset");
}

std::vector<CitationCheck> verify_citations(const Preset& preset) {
    std::vector<CitationCheck> out;
    for (const auto& c : preset.citations) {
        CitationCheck check{preset.name, c.key, c.quoted, get_setting(preset.settings, c.key), false};
        try {
            const double want = parse_quantity(c.quoted);
            const double got = parse_quantity(check.actual);
            check.ok = std::abs(got - want) <= 1e-12 * std::max(std::abs(want), 1e-300) || got == want;
        } catch (const ConfigError&) {
            check.ok = check.actual == c.quoted;
        }
        out.push_back(std::move(check));
    }
    return out;
}

}  // namespace magphon
