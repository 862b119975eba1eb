// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.
// Usage: magphon_acceptance <c1..c9|all>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "magphon/config.hpp"
#include "magphon/encircle.hpp"
#include "magphon/ep_spectral.hpp"
#include "magphon/errors.hpp"
#include "magphon/noise_spectrum.hpp"
#include "magphon/output.hpp"
#include "magphon/presets.hpp"
#include "magphon/run.hpp"
#include "magphon/self_energy.hpp"
#include "oracles.hpp"

using namespace magphon;
namespace fs = std::filesystem;
using oracle::cplx;

namespace {

// c1
constexpr double kSigmaIdentityTol = 1e-12;
constexpr double kModulusTol = 1e-15;  // |Sigma_mr| vs |Sigma_rm|: a few ulp of rounding
constexpr double kPhaseTol = 1e-12;
// c2
constexpr int kSpectrumDraws = 1000;
constexpr double kSpectrumTol = 1e-10;
constexpr double kMinDenominator = 1e-3;
// c3: a band is a local maximum of log10(psd) along omega with topographic
// prominence of at least half a decade.
constexpr double kBandProminence = 0.5;
constexpr double kDarkModeDetuning = -10e6;
constexpr double kMagnonSide = 1e9;  // bands below this frequency belong to the magnon
// c4
constexpr int kMatrixDraws = 10000;
constexpr double kVietaTol = 1e-12;
constexpr double kDenseTol = 1e-10;
// c5
constexpr double kEpGapRel = 1e-6;
constexpr std::size_t kOracleGrid = 512;
// c7
constexpr double kDominance = 0.5;
constexpr double kChiralityGap = 0.05;
constexpr double kSelfConvergence = 1e-4;
// c8
constexpr double kMachine = 1e-15;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

void note(const std::string& text) { std::cout << "# " << text << '\n'; }

double rel(cplx got, cplx want, double scale) { return std::abs(got - want) / scale; }

// ---------------------------------------------------------------- c1

Outcome c1() {
    std::vector<SystemConfig> configs;
    for (const char* name : {"fig2a", "fig2b", "fig3"}) configs.push_back(find_preset(name).settings.system);
    oracle::Draw d(101);
    for (int k = 0; k < 20; ++k) configs.push_back(oracle::random_config(d));

    double worst_zero = 0.0, worst_odd = 0.0, worst_mod = 0.0, worst_phase = 0.0;
    for (SystemConfig c : configs) {
        const double span = 5.0 * c.te.gamma;
        for (const double w : {c.phonon.omega, c.magnon.omega, 0.37 * c.te.gamma}) {
            c.te_drive.detuning = 0.0;
            const double scale0 = std::norm(effective_couplings(c).g_b) / (0.5 * c.te.gamma);
            if (scale0 > 0.0) worst_zero = std::max(worst_zero, std::abs(sigma_rr(w, c)) / scale0);
            for (int k = 0; k <= 100; ++k) {
                const double delta = span * (k - 50) / 50.0;
                SystemConfig plus = c, minus = c;
                plus.te_drive.detuning = delta;
                minus.te_drive.detuning = -delta;
                const cplx sp = sigma_rr(w, plus);
                const cplx sm = sigma_rr(w, minus);
                const double scale = std::max(std::abs(sp), std::abs(sm));
                if (scale > 0.0) worst_odd = std::max(worst_odd, std::abs(sp + sm) / scale);

                for (int j = 0; j <= 100; j += 10) {
                    SystemConfig x = plus;
                    x.tm_drive.detuning = span * (j - 50) / 50.0;
                    const cplx mr = sigma_mr(w, x);
                    const cplx rm = sigma_rm(w, x);
                    if (std::abs(rm) == 0.0) continue;
                    worst_mod = std::max(worst_mod, std::abs(std::abs(mr) - std::abs(rm)) / std::abs(rm));
                    const double phase = std::arg(mr / rm);
                    const double want = 2.0 * std::arg(effective_couplings(x).g_b);
                    worst_phase = std::max(worst_phase, std::abs(std::remainder(phase - want, 2.0 * std::numbers::pi)));
                }
            }
        }
    }
    const bool pass = worst_zero <= kSigmaIdentityTol && worst_odd <= kSigmaIdentityTol &&
                      worst_mod <= kModulusTol && worst_phase <= kPhaseTol;
    return {pass, "Sigma_rr(Delta_b=0) " + num(worst_zero) + ", odd part " + num(worst_odd) + " (tol " +
                      num(kSigmaIdentityTol) + "); | |Sigma_mr|-|Sigma_rm| | " + num(worst_mod) + " (tol " +
                      num(kModulusTol) + "); phase - 2 arg G_b " + num(worst_phase) + " rad (tol " +
                      num(kPhaseTol) + ")"};
}

// ---------------------------------------------------------------- c2

Outcome c2() {
    oracle::Draw d(202);
    double worst_elim = 0.0, worst_oracle = 0.0, worst_literal = 0.0;
    int literal_mismatch = 0, redraws = 0;
    for (int k = 0; k < kSpectrumDraws;) {
        const SystemConfig c = oracle::random_config(d);
        const double w = d.uniform(-4.0, 4.0);
        const ClosedFormTerms t = closed_form_response(w, c);
        TransferCoefficients direct;
        try {
            if (std::abs(t.denominator) < kMinDenominator) throw NumericError("near a denominator zero");
            direct = linear_system_response(w, c, NoiseParams::all());
        } catch (const NumericError&) {
            ++redraws;
            continue;
        }
        const auto elim = eliminated_response(w, c);
        for (int ch = 0; ch < 4; ++ch) {
            worst_elim = std::max(worst_elim, oracle::rel_err(elim[ch], direct.coefficient[ch]));
            worst_oracle = std::max(worst_oracle, oracle::rel_err(direct.coefficient[ch], oracle::langevin_b(w, c, ch)));
        }
        const double e_r = oracle::rel_err(t.b_phonon, direct.coefficient[0] + direct.coefficient[1]);
        const double e_m = oracle::rel_err(t.b_magnon, direct.coefficient[2]);
        worst_literal = std::max({worst_literal, e_r, e_m});
        literal_mismatch += (e_r > kSpectrumTol || e_m > kSpectrumTol);
        ++k;
    }
    note("literal closed form (reflected source taken as -Z) differs from the direct solve on " +
         std::to_string(literal_mismatch) + "/" + std::to_string(kSpectrumDraws) + " draws, worst " +
         num(worst_literal) + "; the 6x6 direct solve stays the default path");

    // Subdomains on which the literal form is exact.
    double worst_real_gb = 0.0, worst_no_gb = 0.0;
    for (int k = 0; k < kSpectrumDraws; ++k) {
        SystemConfig c = oracle::random_config(d);
        c.te_drive.detuning = 0.0;
        const double w = d.uniform(-4.0, 4.0);
        const ClosedFormTerms t = closed_form_response(w, c);
        if (std::abs(t.denominator) < kMinDenominator) continue;
        worst_real_gb = std::max(worst_real_gb, oracle::rel_err(t.b_phonon, linear_system_solve(w, c, {1.0, 1.0, 0.0, 0.0})));
        c.te_drive.effective_strength = 0.0;
        const ClosedFormTerms m = closed_form_response(w, c);
        worst_no_gb = std::max(worst_no_gb, oracle::rel_err(m.b_magnon, linear_system_solve(w, c, {0.0, 0.0, 1.0, 0.0})));
    }

    const bool pass = worst_elim <= kSpectrumTol && worst_oracle <= kSpectrumTol && worst_real_gb <= kSpectrumTol &&
                      worst_no_gb <= kSpectrumTol;
    return {pass, std::to_string(kSpectrumDraws) + " draws (" + std::to_string(redraws) +
                      " redrawn near singular points): closed-form elimination vs 6x6 " + num(worst_elim) +
                      ", 6x6 vs Gauss-Jordan oracle " + num(worst_oracle) + ", literal form on real G_b " +
                      num(worst_real_gb) + ", on G_b = 0 " + num(worst_no_gb) + " (tol " + num(kSpectrumTol) +
                      "); literal-form mismatches logged: " + std::to_string(literal_mismatch)};
}

// ---------------------------------------------------------------- c3

struct BandMap {
    std::vector<double> omega, detuning;
    std::vector<std::vector<std::size_t>> peaks;  // peak indices per detuning row
};

BandMap bands(const char* preset) {
    const Settings& s = find_preset(preset).settings;
    BandMap m;
    m.omega = s.omega_axis.values();
    m.detuning = s.detuning_axis.values();
    const auto map = psd_map(s.system, m.omega, m.detuning, s.swept, s.noise, 1);
    const std::size_t n = m.omega.size();
    for (std::size_t r = 0; r < m.detuning.size(); ++r) {
        std::vector<double> row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = std::log10(std::max(map[r * n + i].psd, 1e-300));
        std::vector<std::size_t> where;
        oracle::count_prominent_peaks(row, kBandProminence, &where);
        m.peaks.push_back(where);
    }
    return m;
}

bool has_magnon_band(const BandMap& m, std::size_t row) {
    return std::any_of(m.peaks[row].begin(), m.peaks[row].end(), [&](std::size_t i) { return m.omega[i] < kMagnonSide; });
}

Outcome c3() {
    const BandMap weak = bands("fig4a");
    std::size_t weak_two = 0;
    for (const auto& p : weak.peaks) weak_two += (p.size() == 2);
    const auto& mid = weak.peaks[weak.peaks.size() / 2];
    std::string where;
    for (const auto i : mid) where += (where.empty() ? "" : ", ") + num(weak.omega[i] / 1e9) + " GHz";

    std::size_t strong_max = 0;
    std::vector<BandMap> strong;
    for (const char* p : {"fig4b", "fig4c"}) {
        strong.push_back(bands(p));
        for (const auto& row : strong.back().peaks) strong_max = std::max(strong_max, row.size());
    }

    // Dark mode on the TE sweep at strong drive with the TM pump on resonance:
    // no magnon band once the detuning is above -10 MHz, but one below it.
    const BandMap& dark = strong[0];
    std::size_t above_with = 0, above = 0, below_with = 0, below = 0;
    for (std::size_t r = 0; r < dark.detuning.size(); ++r) {
        const bool m = has_magnon_band(dark, r);
        if (dark.detuning[r] > kDarkModeDetuning) {
            ++above;
            above_with += m;
        } else {
            ++below;
            below_with += m;
        }
    }
    const bool weak_ok = weak_two == weak.peaks.size();
    const bool strong_ok = strong_max >= 3;
    const bool dark_ok = above_with == 0 && below_with > 0;
    return {weak_ok && strong_ok && dark_ok,
            "weak drive: " + std::to_string(weak_two) + "/" + std::to_string(weak.peaks.size()) +
                " rows with exactly 2 bands (centre row at " + where + ") [" + (weak_ok ? "ok" : "fail") +
                "]; strong drive: at most " + std::to_string(strong_max) + " bands in any row, need 3 [" +
                (strong_ok ? "ok" : "fail") + "]; dark mode: magnon band in " + std::to_string(above_with) + "/" +
                std::to_string(above) + " rows above -10 MHz and " + std::to_string(below_with) + "/" +
                std::to_string(below) + " rows below [" + (dark_ok ? "ok" : "fail") + "]; prominence " +
                num(kBandProminence) + " decades"};
}

// ---------------------------------------------------------------- c4

Outcome c4() {
    oracle::Draw d(404);
    double worst_tr = 0.0, worst_det = 0.0, worst_d = 0.0, worst_dense = 0.0;
    for (int k = 0; k < kMatrixDraws; ++k) {
        Matrix2c h;
        if (k % 2 == 0) {
            for (int i = 0; i < 4; ++i) h(i / 2, i % 2) = d.complex(1.0);
        } else {
            SystemConfig c = oracle::random_config(d);
            h = build_hamiltonian(c).h;
        }
        const EigenPair e = eigenpairs(h);
        const double s = std::abs(e.lambda_plus) + std::abs(e.lambda_minus);
        if (s == 0.0) continue;
        const cplx diff = e.lambda_plus - e.lambda_minus;
        worst_tr = std::max(worst_tr, rel(e.lambda_plus + e.lambda_minus, h.trace(), s));
        worst_det = std::max(worst_det, rel(e.lambda_plus * e.lambda_minus, h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0), s * s));
        worst_d = std::max(worst_d, rel(diff * diff, discriminant(h), s * s));
        const auto dense = oracle::dense_eigenvalues(h);
        const double direct = std::max(rel(e.lambda_plus, dense[0], s), rel(e.lambda_minus, dense[1], s));
        const double swapped = std::max(rel(e.lambda_plus, dense[1], s), rel(e.lambda_minus, dense[0], s));
        worst_dense = std::max(worst_dense, std::min(direct, swapped));
    }
    const bool pass = worst_tr <= kVietaTol && worst_det <= kVietaTol && worst_d <= kVietaTol && worst_dense <= kDenseTol;
    return {pass, std::to_string(kMatrixDraws) + " matrices: trace " + num(worst_tr) + ", determinant " +
                      num(worst_det) + ", (l+ - l-)^2 vs D " + num(worst_d) + " (tol " + num(kVietaTol) +
                      "); dense solver " + num(worst_dense) + " (tol " + num(kDenseTol) + ")"};
}

// ---------------------------------------------------------------- c5

struct OracleZero {
    double p, delta;
};

/// Cells of a fine grid around which the discriminant winds once or more.
std::vector<OracleZero> winding_cells(const ParameterPlane& plane, const Region& r) {
    const std::size_t n = kOracleGrid;
    const auto p_at = [&](std::size_t i) { return r.p_min + (r.p_max - r.p_min) * double(i) / double(n - 1); };
    const auto d_at = [&](std::size_t j) { return r.delta_min + (r.delta_max - r.delta_min) * double(j) / double(n - 1); };
    std::vector<double> phase(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Matrix2cd h = oracle::hamiltonian(plane.at(p_at(i), d_at(j)));
            const cplx diff = h(0, 0) - h(1, 1);
            phase[j * n + i] = std::arg(diff * diff + 4.0 * h(0, 1) * h(1, 0));
        }
    }
    const auto step = [](double a, double b) { return std::remainder(b - a, 2.0 * std::numbers::pi); };
    std::vector<OracleZero> zeros;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double a = phase[j * n + i], b = phase[j * n + i + 1];
            const double c = phase[(j + 1) * n + i + 1], e = phase[(j + 1) * n + i];
            const double winding = (step(a, b) + step(b, c) + step(c, e) + step(e, a)) / (2.0 * std::numbers::pi);
            if (std::abs(winding) > 0.5) zeros.push_back({0.5 * (p_at(i) + p_at(i + 1)), 0.5 * (d_at(j) + d_at(j + 1))});
        }
    }
    return zeros;
}

Outcome c5() {
    const Settings& s = find_preset("fig5").settings;
    const ParameterPlane plane = s.plane();
    EpSolverOptions opt;
    opt.seeds_per_axis = s.ep_seeds_per_axis;
    const EpSearchResult found = find_exceptional_points(plane, s.region(), opt);

    double worst_gap = 0.0;
    std::string listing;
    for (const auto& ep : found.points) {
        worst_gap = std::max(worst_gap, ep.gap / std::abs(ep.lambda));
        listing += (listing.empty() ? "" : ", ") + std::string("(") + num(ep.p_in / 1e12) + " THz, " +
                   num(ep.delta / 1e6) + " MHz)";
    }

    const auto zeros = winding_cells(plane, s.region());
    const auto near = [&](double p, double dl, double p2, double d2) {
        return std::abs(p - p2) <= found.coarse_cell_p && std::abs(dl - d2) <= found.coarse_cell_delta;
    };
    std::size_t matched_found = 0, matched_oracle = 0;
    for (const auto& ep : found.points) {
        matched_found += std::any_of(zeros.begin(), zeros.end(), [&](const OracleZero& z) { return near(ep.p_in, ep.delta, z.p, z.delta); });
    }
    for (const auto& z : zeros) {
        matched_oracle += std::any_of(found.points.begin(), found.points.end(),
                                      [&](const EpLocation& ep) { return near(ep.p_in, ep.delta, z.p, z.delta); });
    }

    std::size_t swaps = 0;
    for (const auto& ep : found.points) {
        const auto path = ellipse_path({ep.p_in, ep.delta}, 0.25 * found.coarse_cell_p, 0.25 * found.coarse_cell_delta, 128);
        swaps += track_closed_path(plane, path).swapped;
    }
    const auto free_path = ellipse_path({s.loop.p_center, s.loop.delta_center}, s.loop.radius_units * s.loop.p_unit,
                                        s.loop.radius_units * s.loop.delta_unit, 128);
    const bool free_swaps = track_closed_path(plane, free_path).swapped;

    const bool pass = !found.points.empty() && worst_gap <= kEpGapRel && matched_found == found.points.size() &&
                      matched_oracle == zeros.size() && swaps == found.points.size() && !free_swaps;
    return {pass, std::to_string(found.points.size()) + " EP(s) " + listing + ", worst gap/|lambda| " +
                      num(worst_gap) + " (tol " + num(kEpGapRel) + "); " + std::to_string(kOracleGrid) + "^2 winding oracle: " +
                      std::to_string(zeros.size()) + " zero cell(s), matched " + std::to_string(matched_found) + "/" +
                      std::to_string(found.points.size()) + " and " + std::to_string(matched_oracle) + "/" +
                      std::to_string(zeros.size()) + " within one coarse cell; monodromy swaps around " +
                      std::to_string(swaps) + "/" + std::to_string(found.points.size()) + " EPs, EP-free loop " +
                      (free_swaps ? "swaps" : "does not swap")};
}

// ---------------------------------------------------------------- c6

Outcome c6() {
    const Settings& s = find_preset("fig5").settings;
    const auto p = s.p_axis.values();
    const auto dl = s.delta_axis.values();
    SurfaceOptions opt;
    opt.gap_rel_tol = s.surface_gap_tol;
    const RiemannSurface surf = riemann_surface(s.plane(), p, dl, opt);
    double best = -std::numeric_limits<double>::infinity();
    double at_p = 0.0, at_d = 0.0;
    std::size_t gain_cells = 0;
    for (std::size_t r = 0; r < surf.rows(); ++r) {
        for (std::size_t c = 0; c < surf.cols(); ++c) {
            const std::size_t k = surf.index(r, c);
            const double im = std::max(surf.lambda1[k].imag(), surf.lambda2[k].imag());
            gain_cells += (im > 0.0);
            if (im > best) {
                best = im;
                at_p = p[c];
                at_d = dl[r];
            }
        }
    }
    // Dissipation is -Im(lambda); a negative value is net gain.
    return {best > 0.0, "smallest dissipation -Im(lambda) = " + num(-best) + " Hz at (" + num(at_p / 1e12) +
                            " THz, " + num(at_d / 1e6) + " MHz); " + std::to_string(gain_cells) + "/" +
                            std::to_string(surf.rows() * surf.cols()) + " cells with negative dissipation"};
}

// ---------------------------------------------------------------- c7

struct LoopRun {
    std::string preset;
    bool starts_in_a = false;
    double final_initial[2] = {0.0, 0.0};  // CW, CCW: fraction left in the initial mode
    double max_aligned = 0.0;
    double convergence = 0.0;
};

LoopRun run_loop(const char* preset) {
    const Settings& s = find_preset(preset).settings;
    const ParameterPlane plane = s.plane();
    LoopSpec loop = s.loop;
    const SupermodeBasis basis = initial_basis(loop, plane);
    const Vector2c start = select_initial_state(basis, s.initial);
    LoopRun out;
    out.preset = preset;
    Trajectory traj[2];
    EvolveOptions fine = s.evolve;
    fine.rel_tol *= 0.5;
    fine.abs_tol *= 0.5;
    for (int k = 0; k < 2; ++k) {
        loop.direction = k == 0 ? Direction::cw : Direction::ccw;
        traj[k] = evolve(loop, plane, start, s.evolve);
        const Trajectory refined = evolve(loop, plane, start, fine);
        out.starts_in_a = traj[k].fractions.front().f_a > 0.5;
        const auto& last = traj[k].fractions.back();
        out.final_initial[k] = out.starts_in_a ? last.f_a : last.f_b;
        out.convergence = std::max(out.convergence, std::abs(refined.fractions.back().f_a - last.f_a));
    }
    out.max_aligned = chirality_report(traj[0], traj[1], s.chirality).max_aligned_difference;
    return out;
}

Outcome c7() {
    std::vector<LoopRun> runs;
    for (const char* p : {"fig6a", "fig6b", "fig6c", "fig6d"}) runs.push_back(run_loop(p));
    bool free_ok = true, enclosing_ok = true, chiral_ok = true, converged = true;
    std::string detail;
    for (const auto& r : runs) {
        const bool enclosing = find_preset(r.preset).settings.loop.delta_center == -4.5e6;
        for (const double f : r.final_initial) {
            if (enclosing) {
                enclosing_ok &= (1.0 - f) > kDominance;
            } else {
                free_ok &= f > kDominance;
            }
        }
        if (enclosing) chiral_ok &= r.max_aligned > kChiralityGap;
        converged &= r.convergence < kSelfConvergence;
        detail += r.preset + (enclosing ? " (Delta_c=-4.5 MHz)" : " (Delta_c=-5.5 MHz)") + ": initial mode " +
                  (r.starts_in_a ? "a" : "b") + " keeps " + num(r.final_initial[0]) + " CW / " +
                  num(r.final_initial[1]) + " CCW, max aligned diff " + num(r.max_aligned) + ", tol-halving " +
                  num(r.convergence) + "; ";
    }
    detail += std::string("EP-free keeps initial mode [") + (free_ok ? "ok" : "fail") + "], EP-enclosing ends in the other mode [" +
              (enclosing_ok ? "ok" : "fail") + "], CW/CCW difference > " + num(kChiralityGap) + " [" +
              (chiral_ok ? "ok" : "fail") + "], self-convergence < " + num(kSelfConvergence) + " [" +
              (converged ? "ok" : "fail") + "]";
    return {free_ok && enclosing_ok && chiral_ok && converged, detail};
}

// ---------------------------------------------------------------- c8

Outcome c8() {
    oracle::Draw d(808);
    std::vector<SystemConfig> configs;
    for (const auto& p : preset_registry()) configs.push_back(p.settings.system);
    for (int k = 0; k < 50; ++k) configs.push_back(oracle::random_config(d));
    std::size_t failures = 0, checks = 0;
    const auto expect = [&](bool ok) {
        ++checks;
        failures += !ok;
    };
    for (SystemConfig c : configs) {
        c.tm_drive.effective_strength = 0.0;
        c.te_drive.effective_strength = 0.0;
        const auto g = effective_couplings(c);
        expect(g.g_a == cplx(0.0) && g.g_b == cplx(0.0));
        for (const double w : {0.0, c.magnon.omega, c.phonon.omega, -0.3 * c.te.gamma}) {
            for (const SigmaKind k : {SigmaKind::rr, SigmaKind::mm, SigmaKind::mr, SigmaKind::rm}) {
                expect(sigma(k, w, c) == cplx(0.0));
            }
            const auto tc = linear_system_response(w, c, NoiseParams::all());
            for (const auto& x : tc.coefficient) expect(x == cplx(0.0));
            for (const auto& x : eliminated_response(w, c)) expect(x == cplx(0.0));
            expect(psd(w, c, NoiseParams::all()) == 0.0);
        }
        const Matrix2c h = build_hamiltonian(c).h;
        const cplx bare_r(c.phonon.omega, -0.5 * c.phonon.gamma);
        const cplx bare_m(c.magnon.omega, -0.5 * c.magnon.gamma);
        expect(h(0, 1) == cplx(0.0) && h(1, 0) == cplx(0.0));
        expect(h(0, 0) == bare_r && h(1, 1) == bare_m);
        const EigenPair e = eigenpairs(h);
        const double s = std::abs(bare_r) + std::abs(bare_m);
        const bool ordered = rel(e.lambda_plus, bare_r, s) <= kMachine && rel(e.lambda_minus, bare_m, s) <= kMachine;
        const bool swapped = rel(e.lambda_plus, bare_m, s) <= kMachine && rel(e.lambda_minus, bare_r, s) <= kMachine;
        expect(ordered || swapped);
        if (bare_r != bare_m) {
            const Vector2c& vr = ordered ? e.v_plus : e.v_minus;
            expect(std::abs(vr(1)) <= kMachine && std::abs(std::abs(vr(0)) - 1.0) <= kMachine);
        }
    }

    // Spectrum map and encircling with the pumps unable to couple (no external port).
    const Settings& s4 = find_preset("fig4a").settings;
    SystemConfig quiet = s4.system;
    quiet.tm_drive.effective_strength = quiet.te_drive.effective_strength = 0.0;
    const auto map = psd_map(quiet, s4.omega_axis.values(), s4.detuning_axis.values(), s4.swept, s4.noise, 2);
    expect(std::all_of(map.begin(), map.end(), [](const SpectrumPoint& p) { return p.psd == 0.0; }));

    Settings s6 = find_preset("fig6a").settings;
    s6.system.tm.gamma_ext = s6.system.te.gamma_ext = 0.0;
    const ParameterPlane plane = s6.plane();
    s6.loop.samples = 65;
    const SupermodeBasis basis = initial_basis(s6.loop, plane);
    expect(std::abs(basis.a(1)) + std::abs(basis.b(0)) <= kMachine || std::abs(basis.a(0)) + std::abs(basis.b(1)) <= kMachine);
    const Trajectory t = evolve(s6.loop, plane, select_initial_state(basis, InitialMode::a), s6.evolve);
    expect(std::all_of(t.fractions.begin(), t.fractions.end(),
                       [](const EnergyFraction& f) { return std::abs(f.f_a - 1.0) <= kMachine; }));
    EpSolverOptions opt;
    opt.seeds_per_axis = 8;
    expect(find_exceptional_points(plane, find_preset("fig5").settings.region(), opt).points.empty());

    return {failures == 0, std::to_string(checks - failures) + "/" + std::to_string(checks) +
                               " zero-drive checks at machine precision (couplings, all four Sigma, 6x6 and "
                               "eliminated transfer, PSD map, diagonal H and bare eigenpairs, frozen encircling, "
                               "no EPs)"};
}

// ---------------------------------------------------------------- c9

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::pair<std::string, std::string>> run_preset(const Preset& p, const fs::path& dir, unsigned jobs) {
    fs::remove_all(dir);
    RunSpec spec;
    spec.preset = p.name;
    spec.output = dir;
    spec.jobs = jobs;
    const Settings s = load_config(spec);
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& path : execute(s, spec)) {
        const std::string text = slurp(path);
        files.emplace_back(path.filename().string(), std::string(data_section(text)));
    }
    std::sort(files.begin(), files.end());
    return files;
}

Outcome c9() {
    const fs::path root = fs::temp_directory_path() / "magphon_acceptance_c9";
    std::size_t identical = 0, total = 0, files = 0;
    std::string bad;
    for (const auto& p : preset_registry()) {
        const auto first = run_preset(p, root / (p.name + "_j1"), 1);
        const auto rerun = run_preset(p, root / (p.name + "_j1b"), 1);
        const auto threaded = run_preset(p, root / (p.name + "_j3"), 3);
        ++total;
        files += first.size();
        if (first == rerun && first == threaded) {
            ++identical;
        } else {
            bad += " " + p.name;
        }
    }
    fs::remove_all(root);
    return {identical == total, std::to_string(identical) + "/" + std::to_string(total) +
                                    " presets byte-identical across rerun and jobs 1 vs 3 (" + std::to_string(files) +
                                    " files per pass)" + (bad.empty() ? "" : "; differing:" + bad)};
}

struct Criterion {
    const char* id;
    const char* title;
    double budget_s;
    std::function<Outcome()> check;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {"c1", "self-energy identities", 1.0, c1},
        {"c2", "closed form vs direct spectrum solve", 10.0, c2},
        {"c3", "spectrum band structure", 120.0, c3},
        {"c4", "2x2 eigen-math", 5.0, c4},
        {"c5", "exceptional point search", 60.0, c5},
        {"c6", "negative dissipation on the surface", 60.0, c6},
        {"c7", "dynamical encircling", 120.0, c7},
        {"c8", "zero-drive limit", 1.0, c8},
        {"c9", "deterministic preset outputs", 300.0, c9},
    };
    return all;
}

bool run_one(const Criterion& c) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = c.check();
    } catch (const std::exception& e) {
        o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    std::cout << (pass ? "PASS " : "FAIL ") << c.id << " " << c.title << ": " << o.detail << " [" << num(secs)
              << " s, budget " << num(c.budget_s) << " s" << (in_time ? "" : ", over budget") << "]" << std::endl;
    return pass;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string which = argc > 1 ? argv[1] : "all";
    bool ok = true;
    bool matched = false;
    for (const auto& c : criteria()) {
        if (which != "all" && which != c.id) continue;
        matched = true;
        ok &= run_one(c);
    }
    if (!matched) {
        std::cerr << "unknown criterion '" << which << "' (expected c1..c9 or all)\n";
        return 2;
    }
    return ok ? 0 : 1;
}
