#include "magphon/core_model.hpp"

#include <cmath>
#include <string>

#include "magphon/errors.hpp"
#include "magphon/output.hpp"

namespace magphon {

std::string_view to_string(ModeLabel label) {
    switch (label) {
        case ModeLabel::tm_photon: return "tm_photon";
        case ModeLabel::te_photon: return "te_photon";
        case ModeLabel::magnon: return "magnon";
        case ModeLabel::phonon: return "phonon";
    }
    return "unknown";
}

std::string_view to_string(ConjugationConvention c) {
    return c == ConjugationConvention::paper_literal ? "paper_literal" : "hermitian_consistent";
}

std::string_view to_string(EvalFrequency f) {
    switch (f) {
        case EvalFrequency::at_omega_m: return "omega_m";
        case EvalFrequency::at_omega_r: return "omega_r";
        case EvalFrequency::at_midpoint: return "midpoint";
    }
    return "unknown";
}

void OscillatorMode::validate() const {
    const std::string who = std::string(to_string(label));
    if (!std::isfinite(omega)) {
        throw ConfigError(who + ": resonance frequency must be finite", "OscillatorMode.omega");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw ConfigError(who + ": total damping must be positive, got " + format_number(gamma),
                          "OscillatorMode.gamma");
    }
    if (!(gamma_ext >= 0.0) || gamma_ext > gamma) {
        throw ConfigError(who + ": external damping must lie in [0, gamma], got " +
                              format_number(gamma_ext),
                          "OscillatorMode.gamma_ext");
    }
}

PumpDrive PumpDrive::from_pair(ModeLabel target, double detuning, double input_amplitude,
                               double single_photon_coupling) {
    PumpDrive d{target, detuning, input_amplitude * single_photon_coupling};
    d.validate();
    return d;
}

void PumpDrive::validate() const {
    if (target != ModeLabel::tm_photon && target != ModeLabel::te_photon) {
        throw ConfigError("pump drives must target an optical mode", "PumpDrive.target");
    }
    if (!std::isfinite(detuning)) {
        throw ConfigError("pump detuning must be finite", "PumpDrive.detuning");
    }
    if (!(effective_strength >= 0.0) || !std::isfinite(effective_strength)) {
        throw ConfigError("effective drive strength must be finite and >= 0, got " +
                              format_number(effective_strength),
                          "PumpDrive.effective_strength");
    }
}

void SystemConfig::validate() const {
    const auto expect = [](const OscillatorMode& m, ModeLabel want) {
        if (m.label != want) {
            throw ConfigError("mode slot for " + std::string(to_string(want)) + " holds " +
                                  std::string(to_string(m.label)),
                              "SystemConfig.modes");
        }
        m.validate();
    };
    expect(tm, ModeLabel::tm_photon);
    expect(te, ModeLabel::te_photon);
    expect(magnon, ModeLabel::magnon);
    expect(phonon, ModeLabel::phonon);
    if (tm_drive.target != ModeLabel::tm_photon || te_drive.target != ModeLabel::te_photon) {
        throw ConfigError("drive slots must target their own optical mode", "SystemConfig.drives");
    }
    tm_drive.validate();
    te_drive.validate();
}

cplx susceptibility(double gamma, double omega_res, double omega) {
    if (!(gamma > 0.0)) {
        throw ConfigError("susceptibility needs a positive damping rate", "gamma");
    }
    return 1.0 / cplx(0.5 * gamma, -(omega - omega_res));
}

cplx steady_amplitude(const PumpDrive& drive, const OscillatorMode& mode) {
    if (drive.target != mode.label) {
        throw ConfigError("drive targets " + std::string(to_string(drive.target)) +
                              " but mode is " + std::string(to_string(mode.label)),
                          "PumpDrive.target");
    }
    mode.validate();
    return drive.effective_strength * std::sqrt(2.0 * mode.gamma_ext) /
           cplx(mode.gamma, -drive.detuning);
}

cplx steady_tm_amplitude(const PumpDrive& drive, const OscillatorMode& mode) {
    if (mode.label != ModeLabel::tm_photon) {
        throw ConfigError("steady_tm_amplitude needs the TM photon mode, got " +
                              std::string(to_string(mode.label)),
                          "OscillatorMode.label");
    }
    return steady_amplitude(drive, mode);
}

EffectiveCoupling effective_couplings(const SystemConfig& config) {
    config.validate();
    return {steady_amplitude(config.tm_drive, config.tm),
            steady_amplitude(config.te_drive, config.te)};
}

}  // namespace magphon
