#pragma once

// Parameter model of the hybrid cavity: two optical WGMs (TM and TE), one
// magnon mode and one mechanical mode.
//
// Units: every frequency, detuning, damping and effective coupling is a rate in
// one consistent unit (the presets use Hz, hbar = 1). Effective drive
// strengths a_in*g carry rate^(3/2) so that G = strength*sqrt(2 kappa_ext)/(...)
// is a rate.

#include <complex>
#include <string_view>

namespace magphon {

using cplx = std::complex<double>;

enum class ModeLabel { tm_photon, te_photon, magnon, phonon };

std::string_view to_string(ModeLabel label);

struct OscillatorMode {
    ModeLabel label = ModeLabel::tm_photon;
    double omega = 0.0;      // resonance frequency
    double gamma = 1.0;      // total damping rate
    double gamma_ext = 0.0;  // external (coupling) damping, 0 <= gamma_ext <= gamma

    /// Throws ConfigError naming the violated field.
    void validate() const;
};

/// Pump tone on one optical mode. Only the product a_in*g enters the model,
/// so the drive is stored as that single effective strength.
struct PumpDrive {
    ModeLabel target = ModeLabel::tm_photon;
    double detuning = 0.0;  // pump frequency minus mode frequency
    double effective_strength = 0.0;

    static PumpDrive from_pair(ModeLabel target, double detuning, double input_amplitude,
                               double single_photon_coupling);

    void validate() const;
};

enum class ConjugationConvention {
    paper_literal,         // m-equation couples with G_a, Sigma_mm = -i G_a^2 chi_b
    hermitian_consistent,  // m-equation couples with G_a^*, Sigma_mm = -i |G_a|^2 chi_b
};

enum class EvalFrequency { at_omega_m, at_omega_r, at_midpoint };

std::string_view to_string(ConjugationConvention c);
std::string_view to_string(EvalFrequency f);

struct SystemConfig {
    OscillatorMode tm{ModeLabel::tm_photon, 0.0, 1.0, 0.5};
    OscillatorMode te{ModeLabel::te_photon, 0.0, 1.0, 0.5};
    OscillatorMode magnon{ModeLabel::magnon, 0.0, 1.0, 0.0};
    OscillatorMode phonon{ModeLabel::phonon, 0.0, 1.0, 0.0};
    PumpDrive tm_drive{ModeLabel::tm_photon, 0.0, 0.0};
    PumpDrive te_drive{ModeLabel::te_photon, 0.0, 0.0};
    ConjugationConvention conjugation = ConjugationConvention::paper_literal;
    EvalFrequency sigma_eval = EvalFrequency::at_omega_m;

    void validate() const;
};

struct EffectiveCoupling {
    cplx g_a;  // magnon <-> TE photon, pumped through the TM mode
    cplx g_b;  // phonon <-> TE photon
};

/// chi[omega] = 1 / (gamma/2 - i (omega - omega_res)). Rejects gamma <= 0.
cplx susceptibility(double gamma, double omega_res, double omega);

/// Pump-enhanced amplitude g*<c> = strength * sqrt(2 gamma_ext) / (-i detuning + gamma)
/// of the driven optical mode. `drive.target` must match `mode.label`.
cplx steady_amplitude(const PumpDrive& drive, const OscillatorMode& mode);

/// steady_amplitude restricted to the TM photon; equals G_a.
cplx steady_tm_amplitude(const PumpDrive& drive, const OscillatorMode& mode);

EffectiveCoupling effective_couplings(const SystemConfig& config);

}  // namespace magphon
