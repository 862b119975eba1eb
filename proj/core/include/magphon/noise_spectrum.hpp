#pragma once

// Frequency-domain Langevin response of the TE field to thermal drives on
// the magnon and the mechanical mode.
//
// The direct path solves the closed 6x6 system in the unknowns
//   {b[w], b*[-w], r[w], r*[-w], m[w], m*[-w]}
// built from the three coupled-mode equations and their frequency-reflected
// conjugates. The closed-form X/Y/Z expression for b[w] is kept as a
// verification path.

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "magphon/core_model.hpp"

namespace magphon {

/// Thermal drive channels: the noise amplitude entering r[w], r*[-w], m[w], m*[-w].
enum class NoiseChannel : std::size_t { phonon = 0, phonon_conj = 1, magnon = 2, magnon_conj = 3 };
inline constexpr std::size_t kNoiseChannelCount = 4;

std::string_view to_string(NoiseChannel c);

struct NoiseParams {
    double unit_psd = 1.0;  // flat thermal level shared by every channel
    std::array<bool, kNoiseChannelCount> channels{true, true, true, true};

    static NoiseParams all(double unit_psd = 1.0);
    /// Only the +w drives of the phonon and magnon.
    static NoiseParams paper_mode(double unit_psd = 1.0);

    bool enabled(NoiseChannel c) const { return channels[static_cast<std::size_t>(c)]; }
    void validate() const;
};

/// Amplitude induced in b[w] per unit-amplitude noise in each channel.
/// Disabled channels report zero. Independent of unit_psd.
struct TransferCoefficients {
    std::array<cplx, kNoiseChannelCount> coefficient{};
    std::array<bool, kNoiseChannelCount> enabled{};
};

/// Reciprocal condition estimate below which the 6x6 system is rejected.
inline constexpr double kSingularRcond = 1e-14;

/// b[w] for arbitrary complex noise amplitudes (index by NoiseChannel).
/// Throws NumericError when the system is near-singular.
cplx linear_system_solve(double omega, const SystemConfig& config,
                         const std::array<cplx, kNoiseChannelCount>& noise_amplitudes);

TransferCoefficients linear_system_response(double omega, const SystemConfig& config,
                                            const NoiseParams& noise);

/// Ingredients and result of the literal closed-form expression:
///   b = (X Y X~ + X) / (1 - X Y X~ Y~) * Z,   X~ = X*[-w], Y~ = Y*[-w],
///   Z = -i G_b (chi_r + chi_r*[-w]) sqrt(gamma_r) eta_r - i G_a chi_m sqrt(gamma_m) eta_m.
struct ClosedFormTerms {
    cplx x, y, x_reflected, y_reflected;
    cplx denominator;
    cplx z_phonon;  // Z per unit eta_r
    cplx z_magnon;  // Z per unit eta_m
    cplx b_phonon;  // b per unit eta_r
    cplx b_magnon;  // b per unit eta_m
};

/// Denominator magnitude below which closed forms are rejected.
inline constexpr double kClosedFormMinDenominator = 1e-12;

ClosedFormTerms closed_form_response(double omega, const SystemConfig& config);

/// Closed-form elimination that keeps the reflected source Z*[-w] of the
/// conjugate field: b = (X Z - X Y X~ Z~) / (1 - X Y X~ Y~). Returned per
/// direct channel, comparable with linear_system_response.
std::array<cplx, kNoiseChannelCount> eliminated_response(double omega, const SystemConfig& config);

/// Sum over enabled channels of |coefficient|^2 * unit_psd. The channels are
/// mutually uncorrelated, so there are no cross terms.
double psd(double omega, const SystemConfig& config, const NoiseParams& noise);

struct SpectrumPoint {
    double omega = 0.0;
    double detuning = 0.0;
    double psd = 0.0;
};

enum class SweptPump { te, tm };

std::string_view to_string(SweptPump p);

/// One SpectrumPoint per (detuning, omega) cell, row-major with detuning as the
/// row index. The swept pump's detuning is replaced by the row value.
std::vector<SpectrumPoint> psd_map(const SystemConfig& config_template,
                                   std::span<const double> omega_grid,
                                   std::span<const double> detuning_grid, SweptPump swept,
                                   const NoiseParams& noise, unsigned jobs = 1);

}  // namespace magphon
