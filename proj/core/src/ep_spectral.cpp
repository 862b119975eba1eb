#include "magphon/ep_spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "magphon/errors.hpp"
#include "magphon/output.hpp"
#include "magphon/parallel.hpp"
#include "magphon/self_energy.hpp"

namespace magphon {

namespace {

constexpr cplx kI{0.0, 1.0};

// Combined Re+Im displacement used for every continuity match.
double l1(cplx a, cplx b) { return std::abs(a.real() - b.real()) + std::abs(a.imag() - b.imag()); }

struct Match {
    cplx first, second;
    double cost;
    double alternative_cost;
};

// Assign the unordered pair {x, y} to the previous (p1, p2) by minimal displacement.
Match match_pair(cplx p1, cplx p2, cplx x, cplx y) {
    const double keep = l1(p1, x) + l1(p2, y);
    const double swap = l1(p1, y) + l1(p2, x);
    if (keep <= swap) return {x, y, keep, swap};
    return {y, x, swap, keep};
}

Vector2c eigenvector(const Matrix2c& h, cplx lambda, int fallback_axis) {
    const Vector2c c1(h(0, 1), lambda - h(0, 0));
    const Vector2c c2(lambda - h(1, 1), h(1, 0));
    const double n1 = c1.norm();
    const double n2 = c2.norm();
    const double scale = std::max(h.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    if (std::max(n1, n2) <= 1e-14 * scale) {
        return fallback_axis == 0 ? Vector2c(1.0, 0.0) : Vector2c(0.0, 1.0);
    }
    return normalize_phase(n1 >= n2 ? c1 : c2);
}

}  // namespace

Vector2c normalize_phase(const Vector2c& v) {
    const double n = v.norm();
    if (!(n > 0.0)) return v;
    Vector2c u = v / n;
    const int lead = std::abs(u(0)) > 1e-14 ? 0 : 1;
    const double mag = std::abs(u(lead));
    u *= std::conj(u(lead)) / mag;
    u(lead) = cplx(std::abs(u(lead)), 0.0);
    return u;
}

EffectiveHamiltonian build_hamiltonian(const SystemConfig& config) {
    const auto [g_a, g_b] = effective_couplings(config);
    const double w = eval_frequency(config, config.sigma_eval);
    const cplx chi = te_susceptibility(config, w);
    const cplx chi_refl = std::conj(te_susceptibility(config, -w));
    const cplx ga2 = config.conjugation == ConjugationConvention::paper_literal
                         ? g_a * g_a
                         : cplx(std::norm(g_a), 0.0);

    Matrix2c h;
    h(0, 0) = cplx(config.phonon.omega, -0.5 * config.phonon.gamma) - kI * std::norm(g_b) * (chi - chi_refl);
    h(0, 1) = -kI * std::conj(g_a) * g_b * chi;
    h(1, 0) = -kI * g_a * g_b * chi;
    h(1, 1) = cplx(config.magnon.omega, -0.5 * config.magnon.gamma) - kI * ga2 * chi;
    return {h, w};
}

cplx discriminant(const Matrix2c& h) {
    const cplx diff = h(0, 0) - h(1, 1);
    return diff * diff + 4.0 * h(0, 1) * h(1, 0);
}

EigenPair eigenpairs(const Matrix2c& h) {
    const cplx half_trace = 0.5 * (h(0, 0) + h(1, 1));
    const cplx half_root = 0.5 * std::sqrt(discriminant(h));
    EigenPair e;
    e.lambda_plus = half_trace + half_root;
    e.lambda_minus = half_trace - half_root;
    e.v_plus = eigenvector(h, e.lambda_plus, 0);
    e.v_minus = eigenvector(h, e.lambda_minus, 1);
    return e;
}

cplx printed_ep_condition(const SystemConfig& config) {
    const auto [g_a, g_b] = effective_couplings(config);
    const double w = eval_frequency(config, config.sigma_eval);
    const cplx chi = te_susceptibility(config, w);
    const cplx inner = 2.0 * std::norm(g_b) * (std::conj(chi) - chi) + 2.0 * g_a * g_a * g_b +
                       config.magnon.gamma - config.phonon.gamma +
                       2.0 * kI * (config.magnon.omega - config.phonon.omega);
    return 16.0 * std::norm(g_a) * g_b * g_b * chi * chi + inner * inner;
}

SystemConfig ParameterPlane::at(double p_in, double delta) const {
    SystemConfig c = base;
    c.tm_drive.effective_strength = p_in;
    c.te_drive.effective_strength = p_in;
    c.te_drive.detuning = delta;
    if (tie_detunings) c.tm_drive.detuning = delta;
    return c;
}

void Region::validate() const {
    const bool finite = std::isfinite(p_min) && std::isfinite(p_max) && std::isfinite(delta_min) &&
                        std::isfinite(delta_max);
    if (!finite || !(p_max > p_min) || !(delta_max > delta_min)) {
        throw ConfigError("search region must be a non-degenerate rectangle", "Region");
    }
}

bool Region::contains(ParamPoint p, double slack) const {
    const double sp = slack * (p_max - p_min);
    const double sd = slack * (delta_max - delta_min);
    return p.p_in >= p_min - sp && p.p_in <= p_max + sp && p.delta >= delta_min - sd &&
           p.delta <= delta_max + sd;
}

namespace {

struct ScaledResidual {
    const ParameterPlane& plane;
    const EpSolverOptions& opt;
    double scale;

    ParamPoint point(const Eigen::Vector2d& x) const { return {x(0) * opt.p_unit, x(1) * opt.delta_unit}; }

    // Negative strengths are unphysical; an infinite residual makes the line search back off.
    Eigen::Vector2d operator()(const Eigen::Vector2d& x) const {
        if (!(x(0) >= 0.0)) {
            const double inf = std::numeric_limits<double>::infinity();
            return {inf, inf};
        }
        const cplx d = discriminant(plane.hamiltonian(point(x))) / scale;
        return {d.real(), d.imag()};
    }
};

double discriminant_scale(const SystemConfig& c) {
    const double s = std::abs(c.phonon.omega - c.magnon.omega) + 0.5 * (c.phonon.gamma + c.magnon.gamma);
    return s * s;
}

}  // namespace

std::optional<EpLocation> refine_exceptional_point(const ParameterPlane& plane, ParamPoint seed,
                                                   const EpSolverOptions& opt, std::string* why) {
    const auto fail = [&](std::string reason) -> std::optional<EpLocation> {
        if (why) *why = std::move(reason);
        return std::nullopt;
    };
    const ScaledResidual f{plane, opt, discriminant_scale(plane.base)};
    Eigen::Vector2d x(seed.p_in / opt.p_unit, seed.delta / opt.delta_unit);
    Eigen::Vector2d fx = f(x);

    bool converged = false;
    for (int it = 0; it < opt.max_iterations; ++it) {
        if (fx.norm() <= opt.residual_tol) {
            converged = true;
            break;
        }
        Eigen::Matrix2d jac;
        for (int k = 0; k < 2; ++k) {
            Eigen::Vector2d hi = x, lo = x;
            hi(k) += opt.fd_step;
            lo(k) -= opt.fd_step;
            jac.col(k) = (f(hi) - f(lo)) / (2.0 * opt.fd_step);
        }
        const Eigen::FullPivLU<Eigen::Matrix2d> lu(jac);
        if (!lu.isInvertible() || std::abs(jac.determinant()) < 1e-300) {
            return fail("singular Jacobian");
        }
        const Eigen::Vector2d step = -lu.solve(fx);
        double alpha = 1.0;
        Eigen::Vector2d trial = x + step;
        Eigen::Vector2d ft = f(trial);
        while (ft.norm() >= fx.norm() && alpha > 1e-10) {
            alpha *= 0.5;
            trial = x + alpha * step;
            ft = f(trial);
        }
        if (ft.norm() >= fx.norm()) {
            // No descent: we are at the floating-point floor or at a non-root minimum.
            converged = fx.norm() <= 1e3 * opt.residual_tol;
            if (!converged) return fail("line search stalled at |D|/scale=" + format_number(fx.norm()));
            break;
        }
        x = trial;
        fx = ft;
        if (x(0) < 0.0) return fail("left the physical half-plane P_in >= 0");
        if ((alpha * step).norm() < 1e-14) {
            converged = fx.norm() <= 1e3 * opt.residual_tol;
            break;
        }
    }
    if (!converged) return fail("no convergence, |D|/scale=" + format_number(fx.norm()));

    const ParamPoint p = f.point(x);
    const Matrix2c h = plane.hamiltonian(p);
    const cplx d = discriminant(h);
    const EigenPair e = eigenpairs(h);
    EpLocation loc{p.p_in, p.delta, std::abs(d), std::abs(e.lambda_plus - e.lambda_minus),
                   0.5 * (h(0, 0) + h(1, 1))};
    if (loc.gap > opt.gap_rel_tol * std::abs(loc.lambda)) {
        return fail("eigenvalue gap above tolerance");
    }
    return loc;
}

EpSearchResult find_exceptional_points(const ParameterPlane& plane, const Region& region,
                                       const EpSolverOptions& opt) {
    region.validate();
    plane.base.validate();
    if (opt.seeds_per_axis < 8) {
        throw ConfigError("seeds_per_axis must be at least 8", "EpSolverOptions.seeds_per_axis");
    }
    const std::size_t n = opt.seeds_per_axis;
    EpSearchResult result;
    result.coarse_cell_p = (region.p_max - region.p_min) / static_cast<double>(n - 1);
    result.coarse_cell_delta = (region.delta_max - region.delta_min) / static_cast<double>(n - 1);

    std::vector<double> mag(n * n);
    const auto node = [&](std::size_t i, std::size_t j) {
        return ParamPoint{region.p_min + static_cast<double>(j) * result.coarse_cell_p,
                          region.delta_min + static_cast<double>(i) * result.coarse_cell_delta};
    };
    parallel_for(n * n, opt.jobs, [&](std::size_t k) {
        mag[k] = std::abs(discriminant(plane.hamiltonian(node(k / n, k % n))));
    });
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = mag[i * n + j];
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const auto ii = static_cast<std::ptrdiff_t>(i) + di;
                    const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
                    if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(n) ||
                        jj >= static_cast<std::ptrdiff_t>(n)) {
                        continue;
                    }
                    if (mag[static_cast<std::size_t>(ii) * n + static_cast<std::size_t>(jj)] < v) {
                        is_min = false;
                        break;
                    }
                }
            }
            if (is_min) result.seeds.push_back(node(i, j));
        }
    }

    std::vector<std::optional<EpLocation>> refined(result.seeds.size());
    std::vector<std::string> reasons(result.seeds.size());
    parallel_for(result.seeds.size(), opt.jobs, [&](std::size_t k) {
        refined[k] = refine_exceptional_point(plane, result.seeds[k], opt, &reasons[k]);
    });

    for (std::size_t k = 0; k < refined.size(); ++k) {
        if (!refined[k]) {
            result.stalls.push_back({result.seeds[k], reasons[k]});
            continue;
        }
        const EpLocation& loc = *refined[k];
        if (!region.contains({loc.p_in, loc.delta})) continue;
        const bool duplicate = std::any_of(result.points.begin(), result.points.end(), [&](const EpLocation& q) {
            return std::hypot((q.p_in - loc.p_in) / opt.p_unit, (q.delta - loc.delta) / opt.delta_unit) <
                   opt.dedupe_distance;
        });
        if (!duplicate) result.points.push_back(loc);
    }
    std::sort(result.points.begin(), result.points.end(), [](const EpLocation& a, const EpLocation& b) {
        return std::pair(a.p_in, a.delta) < std::pair(b.p_in, b.delta);
    });
    return result;
}

RiemannSurface riemann_surface(const ParameterPlane& plane, std::span<const double> p_grid,
                               std::span<const double> delta_grid, const SurfaceOptions& options) {
    plane.base.validate();
    require_monotone_grid(p_grid, "p_grid");
    require_monotone_grid(delta_grid, "delta_grid");

    RiemannSurface s;
    s.p_grid.assign(p_grid.begin(), p_grid.end());
    s.delta_grid.assign(delta_grid.begin(), delta_grid.end());
    s.reference_frequency = options.reference_frequency;
    const std::size_t cells = s.rows() * s.cols();
    s.lambda1.resize(cells);
    s.lambda2.resize(cells);
    s.near_ep.assign(cells, 0);

    parallel_for(cells, options.jobs, [&](std::size_t k) {
        const EigenPair e = eigenpairs(plane.hamiltonian({s.p_grid[k % s.cols()], s.delta_grid[k / s.cols()]}));
        s.lambda1[k] = e.lambda_plus;
        s.lambda2[k] = e.lambda_minus;
    });

    // Sequential continuity pass, row-major. Each cell is matched against its
    // left and upper neighbours together so rows stay consistent at the seam.
    if (s.lambda1[0].real() < s.lambda2[0].real()) std::swap(s.lambda1[0], s.lambda2[0]);
    for (std::size_t i = 0; i < s.rows(); ++i) {
        for (std::size_t j = 0; j < s.cols(); ++j) {
            const std::size_t k = s.index(i, j);
            const cplx x = s.lambda1[k];
            const cplx y = s.lambda2[k];
            if (k != 0) {
                double keep = 0.0, swap = 0.0;
                if (j > 0) {
                    const std::size_t l = s.index(i, j - 1);
                    keep += l1(s.lambda1[l], x) + l1(s.lambda2[l], y);
                    swap += l1(s.lambda1[l], y) + l1(s.lambda2[l], x);
                }
                if (i > 0) {
                    const std::size_t u = s.index(i - 1, j);
                    keep += l1(s.lambda1[u], x) + l1(s.lambda2[u], y);
                    swap += l1(s.lambda1[u], y) + l1(s.lambda2[u], x);
                }
                if (swap < keep) std::swap(s.lambda1[k], s.lambda2[k]);
                const double best = std::min(keep, swap);
                const double other = std::max(keep, swap);
                if (other > 0.0 && best / other > options.ambiguity) s.near_ep[k] = 1;
            }
            const double mean = 0.5 * std::abs(x + y);
            if (std::abs(x - y) <= options.gap_rel_tol * mean) s.near_ep[k] = 1;
        }
    }
    return s;
}

namespace {

struct TrackState {
    cplx first, second;
};

void advance(const ParameterPlane& plane, ParamPoint from, ParamPoint to, TrackState& state,
             double& min_gap, int depth) {
    const EigenPair e = eigenpairs(plane.hamiltonian(to));
    const Match m = match_pair(state.first, state.second, e.lambda_plus, e.lambda_minus);
    const double gap = std::min(std::abs(state.first - state.second), std::abs(e.lambda_plus - e.lambda_minus));
    if (gap == 0.0) throw NumericError("path passes through an eigenvalue degeneracy");
    const double move = std::max(l1(state.first, m.first), l1(state.second, m.second));
    if (move > 0.25 * gap && depth < 40) {
        const ParamPoint mid{0.5 * (from.p_in + to.p_in), 0.5 * (from.delta + to.delta)};
        advance(plane, from, mid, state, min_gap, depth + 1);
        advance(plane, mid, to, state, min_gap, depth + 1);
        return;
    }
    min_gap = std::min(min_gap, gap);
    state = {m.first, m.second};
}

}  // namespace

PathTracking track_closed_path(const ParameterPlane& plane, std::span<const ParamPoint> path) {
    if (path.size() < 3) throw ConfigError("closed path needs at least 3 points", "path");
    const EigenPair e0 = eigenpairs(plane.hamiltonian(path[0]));
    TrackState state{e0.lambda_plus, e0.lambda_minus};
    if (state.first.real() < state.second.real()) std::swap(state.first, state.second);
    const TrackState start = state;

    PathTracking out;
    out.min_gap = std::abs(state.first - state.second);
    out.branch1.push_back(state.first);
    out.branch2.push_back(state.second);
    for (std::size_t k = 1; k <= path.size(); ++k) {
        const ParamPoint from = path[k - 1];
        const ParamPoint to = path[k % path.size()];
        advance(plane, from, to, state, out.min_gap, 0);
        out.branch1.push_back(state.first);
        out.branch2.push_back(state.second);
    }
    out.swapped = l1(state.first, start.second) < l1(state.first, start.first);
    return out;
}

std::vector<ParamPoint> ellipse_path(ParamPoint center, double radius_p, double radius_delta,
                                     std::size_t samples) {
    std::vector<ParamPoint> path(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples);
        path[k] = {center.p_in + radius_p * std::cos(th), center.delta + radius_delta * std::sin(th)};
    }
    return path;
}

bool grid_loop_swaps(const RiemannSurface& s, std::size_t row0, std::size_t row1, std::size_t col0,
                     std::size_t col1) {
    if (!(row0 < row1 && col0 < col1 && row1 < s.rows() && col1 < s.cols())) {
        throw ConfigError("grid loop must be a non-degenerate rectangle inside the surface", "grid_loop");
    }
    std::vector<std::size_t> cells;
    for (std::size_t j = col0; j < col1; ++j) cells.push_back(s.index(row0, j));
    for (std::size_t i = row0; i < row1; ++i) cells.push_back(s.index(i, col1));
    for (std::size_t j = col1; j > col0; --j) cells.push_back(s.index(row1, j));
    for (std::size_t i = row1; i > row0; --i) cells.push_back(s.index(i, col0));
    cells.push_back(cells.front());

    cplx a = s.lambda1[cells.front()];
    cplx b = s.lambda2[cells.front()];
    const cplx start_a = a;
    const cplx start_b = b;
    for (std::size_t k = 1; k < cells.size(); ++k) {
        const Match m = match_pair(a, b, s.lambda1[cells[k]], s.lambda2[cells[k]]);
        a = m.first;
        b = m.second;
    }
    return l1(a, start_b) < l1(a, start_a);
}

}  // namespace magphon
