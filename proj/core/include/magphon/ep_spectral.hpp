#pragma once

// Reduced two-mode (phonon, magnon) non-Hermitian Hamiltonian with the
// cavity self-energy frozen at one frequency, its eigen-structure, the
// exceptional points in the (P_in, Delta) drive plane and branch-tracked
// eigenvalue surfaces.

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "magphon/core_model.hpp"

namespace magphon {

using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

/// Basis order is (phonon r, magnon m).
struct EffectiveHamiltonian {
    Matrix2c h;
    double eval_freq = 0.0;
};

struct EigenPair {
    cplx lambda_plus, lambda_minus;  // (tr H +/- sqrt(D)) / 2, principal square root
    Vector2c v_plus, v_minus;        // right eigenvectors, unit norm, first nonzero entry real > 0
};

EffectiveHamiltonian build_hamiltonian(const SystemConfig& config);

/// D = (H00 - H11)^2 + 4 H01 H10; the eigenvalues coalesce iff D = 0.
cplx discriminant(const Matrix2c& h);

/// Closed-form 2x2 eigen-decomposition.
EigenPair eigenpairs(const Matrix2c& h);

/// Scales v to unit norm with its first nonzero entry real and positive.
Vector2c normalize_phase(const Vector2c& v);

/// The literal closed-form EP condition
///   16|G_a|^2 G_b^2 chi_b^2 + (2|G_b|^2 (chi_b^* - chi_b) + 2 G_a^2 G_b
///                              + kappa_m - kappa_r + 2i (omega_m - omega_r))^2
/// evaluated literally at the configured frequency. Diagnostic only: EPs are
/// located through the discriminant instead; the expression equals -4 D
/// once the G_a^2 G_b term reads G_a^2 chi_b and chi_b^* reads chi_b^*[-w].
cplx printed_ep_condition(const SystemConfig& config);

struct ParamPoint {
    double p_in = 0.0;   // common effective strength of both pumps
    double delta = 0.0;  // TE detuning
};

/// Maps (P_in, Delta) onto a configuration: both drives take strength P_in,
/// the TE detuning becomes Delta and, when tied, so does the TM detuning.
struct ParameterPlane {
    SystemConfig base;
    bool tie_detunings = false;

    SystemConfig at(double p_in, double delta) const;
    SystemConfig at(ParamPoint p) const { return at(p.p_in, p.delta); }
    Matrix2c hamiltonian(ParamPoint p) const { return build_hamiltonian(at(p)).h; }
};

struct Region {
    double p_min = 0.0, p_max = 0.0;
    double delta_min = 0.0, delta_max = 0.0;

    void validate() const;
    bool contains(ParamPoint p, double slack = 0.0) const;
};

struct EpLocation {
    double p_in = 0.0;
    double delta = 0.0;
    double residual = 0.0;  // |D| at the solution
    double gap = 0.0;       // |lambda+ - lambda-|
    cplx lambda;            // coalesced eigenvalue (tr H / 2)
};

struct EpSolverOptions {
    std::size_t seeds_per_axis = 16;
    double p_unit = 1e11;      // Newton works in 0.1 THz ...
    double delta_unit = 1e6;   // ... and 1 MHz units
    double residual_tol = 1e-12;  // on |D| / D_scale
    double gap_rel_tol = 1e-6;    // accepted gap relative to |lambda|
    double fd_step = 1e-6;        // finite-difference step, scaled units
    double dedupe_distance = 1e-6;
    int max_iterations = 100;
    unsigned jobs = 1;
};

struct SeedReport {
    ParamPoint seed;
    std::string status;
};

struct EpSearchResult {
    std::vector<EpLocation> points;
    std::vector<SeedReport> stalls;  // seeds whose refinement stalled or diverged
    std::vector<ParamPoint> seeds;
    double coarse_cell_p = 0.0;
    double coarse_cell_delta = 0.0;
};

/// Damped Newton on (Re D, Im D) = 0 from one seed. Returns nullopt and a
/// reason in `why` when the iteration stalls or ends outside the EP invariants.
std::optional<EpLocation> refine_exceptional_point(const ParameterPlane& plane, ParamPoint seed,
                                                   const EpSolverOptions& options,
                                                   std::string* why = nullptr);

/// Seeds from the local minima of |D| on a seeds_per_axis^2 grid over the
/// region, refines each, keeps converged points inside the region and merges
/// duplicates. An empty result is not an error.
EpSearchResult find_exceptional_points(const ParameterPlane& plane, const Region& region,
                                       const EpSolverOptions& options = {});

struct SurfaceOptions {
    double gap_rel_tol = 1e-3;   // flag cells whose gap is below this times |lambda|
    double ambiguity = 0.5;      // flag when best/second-best matching cost exceeds this
    double reference_frequency = 1e9;  // exported real parts are shifts from this
    unsigned jobs = 1;
};

/// Branch-tracked eigenvalue surfaces on a (delta rows) x (p columns) grid.
struct RiemannSurface {
    std::vector<double> p_grid;
    std::vector<double> delta_grid;
    std::vector<cplx> lambda1;  // branch starting with the larger real part at cell (0, 0)
    std::vector<cplx> lambda2;
    std::vector<unsigned char> near_ep;
    double reference_frequency = 1e9;

    std::size_t index(std::size_t i_delta, std::size_t i_p) const { return i_delta * p_grid.size() + i_p; }
    std::size_t rows() const { return delta_grid.size(); }
    std::size_t cols() const { return p_grid.size(); }
};

RiemannSurface riemann_surface(const ParameterPlane& plane, std::span<const double> p_grid,
                               std::span<const double> delta_grid, const SurfaceOptions& options = {});

struct PathTracking {
    bool swapped = false;
    std::vector<cplx> branch1;  // tracked values at the path points (last = return to start)
    std::vector<cplx> branch2;
    double min_gap = 0.0;
};

/// Continues the eigenvalue pair along a closed path (first point repeated
/// implicitly at the end), subdividing segments until each step moves the
/// eigenvalues by less than a fraction of the local gap. `swapped` reports
/// whether the branches are exchanged after one circuit. Throws NumericError
/// when the path passes through a degeneracy.
PathTracking track_closed_path(const ParameterPlane& plane, std::span<const ParamPoint> path);

/// Points on an axis-aligned ellipse, counter-clockwise in the (P_in, Delta) plane.
std::vector<ParamPoint> ellipse_path(ParamPoint center, double radius_p, double radius_delta,
                                     std::size_t samples);

/// Discrete monodromy on the surface grid: walks the boundary of the cell
/// rectangle [i0, i1] x [j0, j1] (delta rows, p columns), matching each cell's
/// eigenvalue pair to the previous one, and reports whether the pair comes
/// back exchanged.
bool grid_loop_swaps(const RiemannSurface& surface, std::size_t row0, std::size_t row1,
                     std::size_t col0, std::size_t col1);

}  // namespace magphon
