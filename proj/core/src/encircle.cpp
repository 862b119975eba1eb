#include "magphon/encircle.hpp"

#include <algorithm>
#include <array>
#include <Eigen/LU>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "magphon/errors.hpp"
#include "magphon/output.hpp"

namespace magphon {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<cplx, 2>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sign_of(Direction d) { return d == Direction::ccw ? 1.0 : -1.0; }

// Angle for any t, periodic in the period; no range check.
double angle_unchecked(const LoopSpec& loop, double t) {
    double u = t / loop.period;
    u -= std::floor(u);
    return loop.start_phase + sign_of(loop.direction) * kTwoPi * u;
}

ParamPoint point_at_angle(const LoopSpec& loop, double theta) {
    const double r = loop.radius_units;
    return {loop.p_center + r * std::cos(theta) * loop.p_unit,
            loop.delta_center + r * std::sin(theta) * loop.delta_unit};
}

std::string describe(ParamPoint p) {
    return "(P_in=" + format_number(p.p_in) + ", Delta=" + format_number(p.delta) + ")";
}

}  // namespace

std::string_view to_string(Direction d) { return d == Direction::cw ? "CW" : "CCW"; }

Direction reversed(Direction d) { return d == Direction::cw ? Direction::ccw : Direction::cw; }

void LoopSpec::validate() const {
    if (!(period > 0.0) || !std::isfinite(period)) throw ConfigError("loop period must be positive", "LoopSpec.period");
    if (samples < 64) throw ConfigError("loop needs at least 64 samples", "LoopSpec.samples");
    if (!(radius_units > 0.0)) throw ConfigError("loop radius must be positive", "LoopSpec.radius_units");
    if (!(p_unit > 0.0) || !(delta_unit > 0.0)) throw ConfigError("loop units must be positive", "LoopSpec.unit_scale");
    if (!std::isfinite(p_center) || !std::isfinite(delta_center) || !std::isfinite(start_phase)) {
        throw ConfigError("loop center and start phase must be finite", "LoopSpec.center");
    }
}

double loop_angle(const LoopSpec& loop, double t) {
    if (!(t >= 0.0 && t <= loop.period)) throw ConfigError("loop time outside [0, period]", "t");
    return angle_unchecked(loop, t);
}

ParamPoint parameters_at(const LoopSpec& loop, double t) { return point_at_angle(loop, loop_angle(loop, t)); }

SupermodeBasis initial_basis(const LoopSpec& loop, const ParameterPlane& plane, double gap_rel_tol) {
    loop.validate();
    const ParamPoint start = parameters_at(loop, 0.0);
    const EigenPair e = eigenpairs(plane.hamiltonian(start));
    const double gap = std::abs(e.lambda_plus - e.lambda_minus);
    if (gap <= gap_rel_tol * 0.5 * std::abs(e.lambda_plus + e.lambda_minus)) {
        throw ConfigError("loop starts within the gap tolerance of an exceptional point " + describe(start),
                          "LoopSpec.start_phase");
    }
    if (e.lambda_plus.real() >= e.lambda_minus.real()) {
        return {e.v_plus, e.v_minus, e.lambda_plus, e.lambda_minus};
    }
    return {e.v_minus, e.v_plus, e.lambda_minus, e.lambda_plus};
}

Vector2c select_initial_state(const SupermodeBasis& basis, InitialMode mode) {
    switch (mode) {
        case InitialMode::a: return basis.a;
        case InitialMode::b: return basis.b;
        case InitialMode::longest_lived:
            return basis.lambda_a.imag() >= basis.lambda_b.imag() ? basis.a : basis.b;
    }
    return basis.a;
}

std::vector<EnergyFraction> energy_fractions(std::span<const Vector2c> states, const SupermodeBasis& basis) {
    Matrix2c m;
    m.col(0) = basis.a;
    m.col(1) = basis.b;
    const cplx det = m.determinant();
    if (!(std::abs(det) > 1e-12)) throw ConfigError("supermode basis is not linearly independent", "basis");
    const Matrix2c inv = m.inverse();

    std::vector<EnergyFraction> out;
    out.reserve(states.size());
    for (const Vector2c& s : states) {
        const Vector2c c = inv * s;
        const double wa = std::norm(c(0));
        const double wb = std::norm(c(1));
        // The larger share is computed directly and the other as its exact
        // complement (Sterbenz), so f_a + f_b == 1 holds bit for bit.
        if (wa >= wb) {
            const double fa = wa / (wa + wb);
            out.push_back({fa, 1.0 - fa});
        } else {
            const double fb = wb / (wa + wb);
            out.push_back({1.0 - fb, fb});
        }
    }
    return out;
}

Trajectory evolve(const LoopSpec& loop, const ParameterPlane& plane, const Vector2c& initial_state,
                  const EvolveOptions& options) {
    loop.validate();
    plane.base.validate();
    if (!(initial_state.norm() > 0.0)) throw ConfigError("initial state must be nonzero", "initial_state");

    Trajectory traj;
    traj.direction = loop.direction;
    traj.basis = initial_basis(loop, plane);

    const cplx offset(options.reference_frequency, 0.0);
    auto rhs = [&](const State& s, State& ds, double t) {
        Matrix2c h = plane.hamiltonian(point_at_angle(loop, angle_unchecked(loop, t)));
        h(0, 0) -= offset;
        h(1, 1) -= offset;
        // ds/dt = -i H s
        ds[0] = cplx(0.0, -1.0) * (h(0, 0) * s[0] + h(0, 1) * s[1]);
        ds[1] = cplx(0.0, -1.0) * (h(1, 0) * s[0] + h(1, 1) * s[1]);
    };

    const std::size_t n = loop.samples;
    const auto sample_time = [&](std::size_t k) {
        return k + 1 == n ? loop.period : loop.period * static_cast<double>(k) / static_cast<double>(n - 1);
    };
    traj.times.resize(n);
    traj.thetas.resize(n);
    traj.params.resize(n);
    traj.states.resize(n);
    traj.log_norms.resize(n);

    const double n0 = initial_state.norm();
    State x{initial_state(0) / n0, initial_state(1) / n0};
    double log_norm = std::log(n0);

    const auto record = [&](std::size_t k, const State& s) {
        const double ns = std::hypot(std::abs(s[0]), std::abs(s[1]));
        traj.times[k] = sample_time(k);
        traj.thetas[k] = loop_angle(loop, traj.times[k]);
        traj.params[k] = point_at_angle(loop, traj.thetas[k]);
        traj.states[k] = Vector2c(s[0] / ns, s[1] / ns);
        traj.log_norms[k] = log_norm + std::log(ns);
    };
    record(0, x);

    Matrix2c h0 = plane.hamiltonian(traj.params[0]);
    const double rate = std::max({std::abs(h0(0, 0) - offset), std::abs(h0(1, 1) - offset),
                                  std::abs(h0(0, 1)), std::abs(h0(1, 0)), 1.0 / loop.period});
    double dt = std::min(0.01 / rate, loop.period / static_cast<double>(n));
    const double min_step = options.min_step_fraction * loop.period;

    auto stepper = odeint::make_dense_output(options.abs_tol, options.rel_tol, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(x, 0.0, dt);

    std::size_t k = 1;
    State sample;
    while (k < n) {
        try {
            stepper.do_step(rhs);
        } catch (const odeint::step_adjustment_error&) {
            throw NumericError("step size underflow at t=" + format_number(stepper.current_time()) + " " +
                               describe(point_at_angle(loop, angle_unchecked(loop, stepper.current_time()))));
        }
        const double t_now = stepper.current_time();
        if (stepper.current_time_step() < min_step && t_now < loop.period) {
            throw NumericError("step size underflow at t=" + format_number(t_now) + " " +
                               describe(point_at_angle(loop, angle_unchecked(loop, t_now))));
        }
        while (k < n && sample_time(k) <= t_now) {
            stepper.calc_state(sample_time(k), sample);
            record(k, sample);
            ++k;
        }
        // Renormalise and restart from the rescaled end point.
        State end = stepper.current_state();
        const double ne = std::hypot(std::abs(end[0]), std::abs(end[1]));
        if (!(ne > 0.0) || !std::isfinite(ne)) {
            throw NumericError("state norm collapsed at " + describe(point_at_angle(loop, angle_unchecked(loop, t_now))));
        }
        log_norm += std::log(ne);
        end[0] /= ne;
        end[1] /= ne;
        stepper.initialize(end, t_now, stepper.current_time_step());
    }

    traj.fractions = energy_fractions(traj.states, traj.basis);
    return traj;
}

namespace {

DirectionMetrics metrics_for(const Trajectory& t, double slope_threshold) {
    DirectionMetrics m;
    m.final_f_a = t.fractions.back().f_a;
    double lo = 1.0, hi = 0.0;
    for (const auto& f : t.fractions) {
        lo = std::min(lo, f.f_a);
        hi = std::max(hi, f.f_a);
    }
    m.oscillation_amplitude = hi - lo;
    for (std::size_t k = 1; k < t.fractions.size(); ++k) {
        const double dtheta = std::abs(t.thetas[k] - t.thetas[k - 1]);
        const double step = dtheta > std::numbers::pi ? kTwoPi - dtheta : dtheta;
        if (step <= 0.0) continue;
        if (std::abs(t.fractions[k].f_a - t.fractions[k - 1].f_a) / step > slope_threshold) {
            m.oscillation_duration += step;
        }
    }
    return m;
}

}  // namespace

ChiralityReport chirality_report(const Trajectory& cw, const Trajectory& ccw, const ChiralityOptions& options) {
    const std::size_t n = cw.times.size();
    if (n < 2 || ccw.times.size() != n || cw.fractions.size() != n || ccw.fractions.size() != n) {
        throw ConfigError("trajectories have mismatched sample counts", "trajectory.samples");
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(cw.times[k] - ccw.times[k]) > 1e-12 * std::abs(cw.times.back())) {
            throw ConfigError("trajectories are sampled on different time grids", "trajectory.times");
        }
    }
    const std::size_t m = n - 1;  // distinct phases; the last sample closes the loop
    if (options.alignment == Alignment::half_period && m % 2 != 0) {
        throw ConfigError("half-period alignment needs an odd sample count", "trajectory.samples");
    }

    ChiralityReport r;
    r.cw = metrics_for(cw, options.slope_threshold);
    r.ccw = metrics_for(ccw, options.slope_threshold);
    r.final_f_a_difference = std::abs(r.cw.final_f_a - r.ccw.final_f_a);
    for (std::size_t i = 0; i <= m; ++i) {
        std::size_t j = i;
        switch (options.alignment) {
            case Alignment::half_period: j = i == m ? m : (i + m / 2) % m; break;
            case Alignment::same_position: j = m - i; break;
            case Alignment::index: break;
        }
        r.max_aligned_difference =
            std::max(r.max_aligned_difference, std::abs(cw.fractions[i].f_a - ccw.fractions[j].f_a));
    }
    return r;
}

}  // namespace magphon
