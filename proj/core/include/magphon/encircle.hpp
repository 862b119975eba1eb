#pragma once

// Dynamical encircling: transport a two-mode state around a closed loop in
// the (P_in, Delta) plane under i ds/dt = H(t) s and project it onto the
// supermodes of the loop's starting point.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "magphon/ep_spectral.hpp"

namespace magphon {

enum class Direction { cw, ccw };

std::string_view to_string(Direction d);
Direction reversed(Direction d);

struct LoopSpec {
    double p_center = 0.0;
    double delta_center = 0.0;
    double radius_units = 1.0;
    double p_unit = 1e11;      // 0.1 THz per unit on the P_in axis
    double delta_unit = 1e6;   // 1 MHz per unit on the Delta axis
    Direction direction = Direction::ccw;
    double period = 1e-4;      // desk-scale default; the long-period run uses 1e-2
    double start_phase = 0.0;  // angle of the start point, measured from +P_in
    std::size_t samples = 513;

    void validate() const;
};

/// Loop angle at time t in [0, period]; t = period maps back onto the start angle.
double loop_angle(const LoopSpec& loop, double t);

/// (p_center + r cos theta * p_unit, delta_center + r sin theta * delta_unit).
ParamPoint parameters_at(const LoopSpec& loop, double t);

struct SupermodeBasis {
    Vector2c a, b;       // "a": larger Re(lambda) at the start point
    cplx lambda_a, lambda_b;
};

/// Right eigenvectors of H at the loop start. Rejects start points whose gap
/// is below gap_rel_tol * |lambda|.
SupermodeBasis initial_basis(const LoopSpec& loop, const ParameterPlane& plane, double gap_rel_tol = 1e-6);

enum class InitialMode { a, b, longest_lived };

/// The basis vector for `mode`; longest_lived picks the one with larger Im(lambda).
Vector2c select_initial_state(const SupermodeBasis& basis, InitialMode mode);

struct EnergyFraction {
    double f_a = 0.0;
    double f_b = 0.0;
};

struct Trajectory {
    Direction direction = Direction::ccw;
    std::vector<double> times;
    std::vector<double> thetas;
    std::vector<ParamPoint> params;
    std::vector<Vector2c> states;     // unit norm
    std::vector<double> log_norms;    // log of the norm removed so far
    std::vector<EnergyFraction> fractions;
    SupermodeBasis basis;
};

struct EvolveOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    double reference_frequency = 1e9;  // common diagonal offset removed before integrating
    double min_step_fraction = 1e-15;  // of the period; smaller accepted steps count as underflow
};

/// Integrates i ds/dt = (H(t) - reference) s with an adaptive Dormand-Prince
/// 5(4) stepper, renormalising after every step, and samples the state at
/// `samples` equally spaced instants from 0 to period. Throws NumericError on
/// step-size underflow, naming the parameter point.
Trajectory evolve(const LoopSpec& loop, const ParameterPlane& plane, const Vector2c& initial_state,
                  const EvolveOptions& options = {});

/// Expands each state in the basis and returns |c_a|^2 / (|c_a|^2 + |c_b|^2)
/// and its complement.
std::vector<EnergyFraction> energy_fractions(std::span<const Vector2c> states, const SupermodeBasis& basis);

enum class Alignment {
    half_period,    // CCW series shifted by half a circuit (a pi phase offset)
    same_position,  // CCW sample visiting the same parameter point
    index,          // same time index
};

struct ChiralityOptions {
    Alignment alignment = Alignment::half_period;
    double slope_threshold = 0.5;  // |d f_a / d theta| above this counts as oscillation
};

struct DirectionMetrics {
    double final_f_a = 0.0;
    double oscillation_amplitude = 0.0;  // max - min of f_a over the circuit
    double oscillation_duration = 0.0;   // loop angle (rad) spent above the slope threshold
};

struct ChiralityReport {
    double final_f_a_difference = 0.0;
    double max_aligned_difference = 0.0;
    DirectionMetrics cw;
    DirectionMetrics ccw;
};

/// Throws ConfigError when the two trajectories are not sampled on the same
/// time grid (or the half-period shift does not land on a sample).
ChiralityReport chirality_report(const Trajectory& cw, const Trajectory& ccw,
                                 const ChiralityOptions& options = {});

}  // namespace magphon
