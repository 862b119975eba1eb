#include "magphon/self_energy.hpp"

#include <cmath>
#include <string>

#include "magphon/errors.hpp"
#include "magphon/parallel.hpp"

namespace magphon {

namespace {

constexpr cplx kI{0.0, 1.0};

SystemConfig with_detunings(const SystemConfig& base, double tm, double te) {
    SystemConfig c = base;
    c.tm_drive.detuning = tm;
    c.te_drive.detuning = te;
    return c;
}

}  // namespace

std::string_view to_string(SigmaKind kind) {
    switch (kind) {
        case SigmaKind::rr: return "rr";
        case SigmaKind::mm: return "mm";
        case SigmaKind::mr: return "mr";
        case SigmaKind::rm: return "rm";
    }
    return "unknown";
}

SigmaKind sigma_kind_from_string(std::string_view name) {
    if (name == "rr") return SigmaKind::rr;
    if (name == "mm") return SigmaKind::mm;
    if (name == "mr") return SigmaKind::mr;
    if (name == "rm") return SigmaKind::rm;
    throw ConfigError("unknown self-energy kind '" + std::string(name) + "' (rr, mm, mr, rm)",
                      "sweep.which");
}

cplx te_susceptibility(const SystemConfig& config, double omega) {
    return susceptibility(config.te.gamma, -config.te_drive.detuning, omega);
}

cplx sigma_rr(double omega, const SystemConfig& config) {
    const auto g = effective_couplings(config);
    const cplx bracket = te_susceptibility(config, omega) - std::conj(te_susceptibility(config, -omega));
    return -kI * std::norm(g.g_b) * bracket;
}

cplx sigma_mm(double omega, const SystemConfig& config) {
    const auto g = effective_couplings(config);
    const cplx ga2 = config.conjugation == ConjugationConvention::paper_literal
                         ? g.g_a * g.g_a
                         : cplx(std::norm(g.g_a), 0.0);
    return -kI * ga2 * te_susceptibility(config, omega);
}

cplx sigma_mr(double omega, const SystemConfig& config) {
    const auto g = effective_couplings(config);
    return -kI * g.g_a * g.g_b * te_susceptibility(config, omega);
}

cplx sigma_rm(double omega, const SystemConfig& config) {
    const auto g = effective_couplings(config);
    return -kI * g.g_a * std::conj(g.g_b) * te_susceptibility(config, omega);
}

cplx sigma(SigmaKind kind, double omega, const SystemConfig& config) {
    switch (kind) {
        case SigmaKind::rr: return sigma_rr(omega, config);
        case SigmaKind::mm: return sigma_mm(omega, config);
        case SigmaKind::mr: return sigma_mr(omega, config);
        case SigmaKind::rm: return sigma_rm(omega, config);
    }
    return {};
}

double eval_frequency(const SystemConfig& config, EvalFrequency where) {
    switch (where) {
        case EvalFrequency::at_omega_m: return config.magnon.omega;
        case EvalFrequency::at_omega_r: return config.phonon.omega;
        case EvalFrequency::at_midpoint: return 0.5 * (config.magnon.omega + config.phonon.omega);
    }
    return config.magnon.omega;
}

double sweep_eval_frequency(const SystemConfig& config, SigmaKind which) {
    return which == SigmaKind::rr ? config.phonon.omega : config.magnon.omega;
}

void require_monotone_grid(std::span<const double> grid, std::string_view name) {
    if (grid.empty()) {
        throw ConfigError(std::string(name) + " grid is empty", std::string(name));
    }
    if (grid.size() < 2) return;
    const bool increasing = grid[1] > grid[0];
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const bool ok = increasing ? grid[i] > grid[i - 1] : grid[i] < grid[i - 1];
        if (!ok || !std::isfinite(grid[i])) {
            throw ConfigError(std::string(name) + " grid is not strictly monotone", std::string(name));
        }
    }
}

std::vector<SelfEnergyPoint> sweep_self_energy(const SystemConfig& config_template,
                                               const SelfEnergySweep& sweep, unsigned jobs) {
    config_template.validate();
    require_monotone_grid(sweep.tm_detunings, "tm_detunings");
    const bool tied = sweep.layout == SweepLayout::tied;
    if (!tied) require_monotone_grid(sweep.te_detunings, "te_detunings");

    const double omega = sweep.eval_override.value_or(sweep_eval_frequency(config_template, sweep.which));
    const std::size_t cols = sweep.tm_detunings.size();
    const std::size_t rows = tied ? 1 : sweep.te_detunings.size();

    std::vector<SelfEnergyPoint> out(rows * cols);
    parallel_for(out.size(), jobs, [&](std::size_t idx) {
        const double tm = sweep.tm_detunings[idx % cols];
        const double te = tied ? tm : sweep.te_detunings[idx / cols];
        const cplx s = sigma(sweep.which, omega, with_detunings(config_template, tm, te));
        out[idx] = SelfEnergyPoint{tm, te, s, s.real(), s.imag()};
    });
    return out;
}

}  // namespace magphon
