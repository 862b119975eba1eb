#include "magphon/noise_spectrum.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "magphon/errors.hpp"
#include "magphon/output.hpp"
#include "magphon/parallel.hpp"
#include "magphon/self_energy.hpp"

namespace magphon {

namespace {

constexpr cplx kI{0.0, 1.0};

using Matrix6 = Eigen::Matrix<cplx, 6, 6>;
using Rhs6 = Eigen::Matrix<cplx, 6, static_cast<int>(kNoiseChannelCount)>;

enum Var { b = 0, b_refl, r, r_refl, m, m_refl };

// Coupling of b into the magnon equation; the b-equation always uses G_a.
cplx magnon_drive_coupling(const SystemConfig& c, cplx g_a) {
    return c.conjugation == ConjugationConvention::paper_literal ? g_a : std::conj(g_a);
}

struct Susceptibilities {
    cplx chi_b_inv, chi_b_refl_inv;  // chi_b^{-1}[w], (chi_b^{-1}[-w])^*
    cplx chi_r, chi_r_refl;          // chi_r[w], chi_r^*[-w]
    cplx chi_m, chi_m_refl;
};

Susceptibilities susceptibilities(double omega, const SystemConfig& c) {
    const double dte = c.te_drive.detuning;
    return {
        1.0 / susceptibility(c.te.gamma, -dte, omega),
        std::conj(1.0 / susceptibility(c.te.gamma, -dte, -omega)),
        susceptibility(c.phonon.gamma, c.phonon.omega, omega),
        std::conj(susceptibility(c.phonon.gamma, c.phonon.omega, -omega)),
        susceptibility(c.magnon.gamma, c.magnon.omega, omega),
        std::conj(susceptibility(c.magnon.gamma, c.magnon.omega, -omega)),
    };
}

Matrix6 system_matrix(double omega, const SystemConfig& c) {
    const auto [g_a, g_b] = effective_couplings(c);
    const cplx g_mb = magnon_drive_coupling(c, g_a);
    const auto s = susceptibilities(omega, c);

    Matrix6 a = Matrix6::Zero();
    a(b, b) = s.chi_b_inv;
    a(b, r) = kI * g_b;
    a(b, r_refl) = kI * g_b;
    a(b, m) = kI * g_a;

    a(b_refl, b_refl) = s.chi_b_refl_inv;
    a(b_refl, r) = -kI * std::conj(g_b);
    a(b_refl, r_refl) = -kI * std::conj(g_b);
    a(b_refl, m_refl) = -kI * std::conj(g_a);

    a(r, r) = 1.0 / s.chi_r;
    a(r, b) = kI * std::conj(g_b);
    a(r, b_refl) = kI * g_b;

    a(r_refl, r_refl) = 1.0 / s.chi_r_refl;
    a(r_refl, b) = -kI * std::conj(g_b);
    a(r_refl, b_refl) = -kI * g_b;

    a(m, m) = 1.0 / s.chi_m;
    a(m, b) = kI * g_mb;

    a(m_refl, m_refl) = 1.0 / s.chi_m_refl;
    a(m_refl, b_refl) = -kI * std::conj(g_mb);
    return a;
}

Rhs6 noise_injection(const SystemConfig& c) {
    Rhs6 rhs = Rhs6::Zero();
    const double sr = std::sqrt(c.phonon.gamma);
    const double sm = std::sqrt(c.magnon.gamma);
    rhs(r, static_cast<int>(NoiseChannel::phonon)) = sr;
    rhs(r_refl, static_cast<int>(NoiseChannel::phonon_conj)) = sr;
    rhs(m, static_cast<int>(NoiseChannel::magnon)) = sm;
    rhs(m_refl, static_cast<int>(NoiseChannel::magnon_conj)) = sm;
    return rhs;
}

Eigen::PartialPivLU<Matrix6> factorize(double omega, const SystemConfig& c) {
    Eigen::PartialPivLU<Matrix6> lu(system_matrix(omega, c));
    const double rc = lu.rcond();
    if (!(rc > kSingularRcond)) {
        throw NumericError("near-singular Langevin system at omega=" + format_number(omega) +
                           " (rcond " + format_number(rc) + ")");
    }
    return lu;
}

struct XY {
    cplx x, y;
};

XY x_and_y(double omega, const SystemConfig& c) {
    const auto [g_a, g_b] = effective_couplings(c);
    const cplx g_mb = magnon_drive_coupling(c, g_a);
    const auto s = susceptibilities(omega, c);
    const cplx spring = s.chi_r - s.chi_r_refl;
    const cplx x_inv = s.chi_b_inv + std::norm(g_b) * spring + g_a * g_mb * s.chi_m;
    if (std::abs(x_inv) < kClosedFormMinDenominator) {
        throw NumericError("closed form: X[omega] diverges at omega=" + format_number(omega));
    }
    return {1.0 / x_inv, g_b * g_b * spring};
}

}  // namespace

std::string_view to_string(NoiseChannel c) {
    switch (c) {
        case NoiseChannel::phonon: return "phonon";
        case NoiseChannel::phonon_conj: return "phonon_conj";
        case NoiseChannel::magnon: return "magnon";
        case NoiseChannel::magnon_conj: return "magnon_conj";
    }
    return "unknown";
}

std::string_view to_string(SweptPump p) { return p == SweptPump::te ? "TE" : "TM"; }

NoiseParams NoiseParams::all(double unit_psd) { return {unit_psd, {true, true, true, true}}; }

NoiseParams NoiseParams::paper_mode(double unit_psd) {
    return {unit_psd, {true, false, true, false}};
}

void NoiseParams::validate() const {
    if (!(unit_psd >= 0.0) || !std::isfinite(unit_psd)) {
        throw ConfigError("unit_psd must be finite and >= 0", "NoiseParams.unit_psd");
    }
}

cplx linear_system_solve(double omega, const SystemConfig& config,
                         const std::array<cplx, kNoiseChannelCount>& noise_amplitudes) {
    config.validate();
    const auto lu = factorize(omega, config);
    Eigen::Matrix<cplx, 6, 1> rhs = noise_injection(config) *
        Eigen::Map<const Eigen::Matrix<cplx, static_cast<int>(kNoiseChannelCount), 1>>(noise_amplitudes.data());
    return lu.solve(rhs)(b);
}

TransferCoefficients linear_system_response(double omega, const SystemConfig& config,
                                            const NoiseParams& noise) {
    config.validate();
    noise.validate();
    const auto lu = factorize(omega, config);
    const Rhs6 solution = lu.solve(noise_injection(config));

    TransferCoefficients out;
    for (std::size_t k = 0; k < kNoiseChannelCount; ++k) {
        out.enabled[k] = noise.channels[k];
        out.coefficient[k] = noise.channels[k] ? solution(b, static_cast<int>(k)) : cplx{};
    }
    return out;
}

ClosedFormTerms closed_form_response(double omega, const SystemConfig& config) {
    config.validate();
    const auto [g_a, g_b] = effective_couplings(config);
    const auto s = susceptibilities(omega, config);
    const XY here = x_and_y(omega, config);
    const XY there = x_and_y(-omega, config);

    ClosedFormTerms t;
    t.x = here.x;
    t.y = here.y;
    t.x_reflected = std::conj(there.x);
    t.y_reflected = std::conj(there.y);
    t.denominator = 1.0 - t.x * t.y * t.x_reflected * t.y_reflected;
    if (std::abs(t.denominator) < kClosedFormMinDenominator) {
        throw NumericError("closed form: vanishing denominator at omega=" + format_number(omega));
    }
    t.z_phonon = -kI * g_b * (s.chi_r + s.chi_r_refl) * std::sqrt(config.phonon.gamma);
    t.z_magnon = -kI * g_a * s.chi_m * std::sqrt(config.magnon.gamma);
    const cplx transfer = (t.x * t.y * t.x_reflected + t.x) / t.denominator;
    t.b_phonon = transfer * t.z_phonon;
    t.b_magnon = transfer * t.z_magnon;
    return t;
}

std::array<cplx, kNoiseChannelCount> eliminated_response(double omega, const SystemConfig& config) {
    const ClosedFormTerms t = closed_form_response(omega, config);
    const auto [g_a, g_b] = effective_couplings(config);
    const auto s = susceptibilities(omega, config);
    const double sr = std::sqrt(config.phonon.gamma);
    const double sm = std::sqrt(config.magnon.gamma);

    // Sources of the b[w] equation (z) and of the b*[-w] equation (z_refl).
    const std::array<cplx, kNoiseChannelCount> z{
        -kI * g_b * s.chi_r * sr, -kI * g_b * s.chi_r_refl * sr, -kI * g_a * s.chi_m * sm, cplx{}};
    const std::array<cplx, kNoiseChannelCount> z_refl{
        kI * std::conj(g_b) * s.chi_r * sr, kI * std::conj(g_b) * s.chi_r_refl * sr, cplx{},
        kI * std::conj(g_a) * s.chi_m_refl * sm};

    std::array<cplx, kNoiseChannelCount> out{};
    const cplx loop = t.x * t.y * t.x_reflected;
    for (std::size_t k = 0; k < kNoiseChannelCount; ++k) {
        out[k] = (t.x * z[k] - loop * z_refl[k]) / t.denominator;
    }
    return out;
}

double psd(double omega, const SystemConfig& config, const NoiseParams& noise) {
    const auto tc = linear_system_response(omega, config, noise);
    double total = 0.0;
    for (std::size_t k = 0; k < kNoiseChannelCount; ++k) {
        if (tc.enabled[k]) total += std::norm(tc.coefficient[k]);
    }
    return total * noise.unit_psd;
}

std::vector<SpectrumPoint> psd_map(const SystemConfig& config_template,
                                   std::span<const double> omega_grid,
                                   std::span<const double> detuning_grid, SweptPump swept,
                                   const NoiseParams& noise, unsigned jobs) {
    config_template.validate();
    noise.validate();
    require_monotone_grid(omega_grid, "omega_grid");
    require_monotone_grid(detuning_grid, "detuning_grid");

    const std::size_t cols = omega_grid.size();
    std::vector<SpectrumPoint> out(detuning_grid.size() * cols);
    parallel_for(detuning_grid.size(), jobs, [&](std::size_t row) {
        SystemConfig c = config_template;
        const double det = detuning_grid[row];
        (swept == SweptPump::te ? c.te_drive : c.tm_drive).detuning = det;
        for (std::size_t col = 0; col < cols; ++col) {
            out[row * cols + col] = {omega_grid[col], det, psd(omega_grid[col], c, noise)};
        }
    });
    return out;
}

}  // namespace magphon
