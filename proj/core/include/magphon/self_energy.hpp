#pragma once

// Optically induced self-energies of the phonon and magnon and the
// cavity-mediated magnon <-> phonon couplings, obtained by eliminating the TE
// field. All quantities live in the TE pump's rotating frame, where
// chi_b[omega] = 1 / (kappa_b/2 - i (omega + Delta_b)).

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "magphon/core_model.hpp"

namespace magphon {

enum class SigmaKind { rr, mm, mr, rm };

std::string_view to_string(SigmaKind kind);
SigmaKind sigma_kind_from_string(std::string_view name);

/// TE susceptibility in the pump frame.
cplx te_susceptibility(const SystemConfig& config, double omega);

/// Sigma_rr = -i |G_b|^2 (chi_b[omega] - chi_b^*[-omega]).
cplx sigma_rr(double omega, const SystemConfig& config);
/// Sigma_mm = -i G_a^2 chi_b (paper_literal) or -i |G_a|^2 chi_b (hermitian_consistent).
cplx sigma_mm(double omega, const SystemConfig& config);
/// Sigma_mr = -i G_a G_b chi_b.
cplx sigma_mr(double omega, const SystemConfig& config);
/// Sigma_rm = -i G_a G_b^* chi_b.
cplx sigma_rm(double omega, const SystemConfig& config);

cplx sigma(SigmaKind kind, double omega, const SystemConfig& config);

/// Frequency at which the self-energies are frozen for the given choice.
double eval_frequency(const SystemConfig& config, EvalFrequency where);

struct SelfEnergyPoint {
    double delta_tm = 0.0;
    double delta_te = 0.0;
    cplx sigma;
    double freq_shift = 0.0;     // Re sigma
    double damping_shift = 0.0;  // Im sigma
};

enum class SweepLayout {
    grid,  // every (tm, te) pair, row-major with the TE detuning as the row index
    tied,  // monochromatic drive: delta_tm = delta_te = grid value
};

struct SelfEnergySweep {
    std::vector<double> tm_detunings;
    std::vector<double> te_detunings;  // ignored for the tied layout
    SigmaKind which = SigmaKind::mm;
    SweepLayout layout = SweepLayout::grid;
    /// Evaluation frequency; defaults to omega_r for rr and omega_m otherwise.
    std::optional<double> eval_override;
};

/// Evaluates one SelfEnergyPoint per cell. Output order is row-major over
/// (te, tm) for the grid layout and follows tm_detunings for the tied layout,
/// independent of `jobs`. Throws ConfigError on empty or non-monotone grids.
std::vector<SelfEnergyPoint> sweep_self_energy(const SystemConfig& config_template,
                                               const SelfEnergySweep& sweep, unsigned jobs = 1);

/// Default evaluation frequency of a sweep: omega_r for rr, omega_m otherwise.
double sweep_eval_frequency(const SystemConfig& config, SigmaKind which);

/// Throws ConfigError unless `grid` is non-empty and strictly monotone.
void require_monotone_grid(std::span<const double> grid, std::string_view name);

}  // namespace magphon
