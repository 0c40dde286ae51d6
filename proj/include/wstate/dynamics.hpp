#pragma once

#include "wstate/model.hpp"
#include "wstate/pulses.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace wstate {

/// Single-step schemes. Both advance with exact exponentials of real
/// symmetric Hamiltonians, so every step is unitary to rounding.
///   Midpoint:          exp(-i h H(t + h/2))
///   CommutatorFree4:   two exponentials of Gauss-point combinations (order 4)
enum class Stepper { Midpoint, CommutatorFree4 };

std::string to_string(Stepper s);
Stepper parse_stepper(const std::string& text);

struct PropagationOptions {
    Stepper stepper = Stepper::CommutatorFree4;
    /// Upper bound on ||H||*dt per substep, ||H|| taken as the max row sum.
    double step_criterion = 0.05;
};

inline constexpr double kNormTolerance = 1e-9;

/// psi <- exp(-i tau H_eff(c)) psi, evaluated through the eigen-decomposition
/// of the N x N Gram matrix of the ground/photon-to-excited coupling block.
void apply_effective_exponential(const CouplingSet& c, double tau, StateVector& psi);

/// psi <- exp(-i tau H) psi for a dense real symmetric H.
void apply_dense_exponential(const RealMatrix& h, double tau, StateVector& psi);

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    /// populations[k][j]: |amplitude k|^2 at times[j].
    std::vector<std::vector<double>> populations;
    double norm_drift = 0.0;
    std::size_t substeps = 0;
    /// Largest ||H||*dt actually taken.
    double max_step_norm = 0.0;

    const StateVector& final_state() const { return states.back(); }
};

StateVector initial_state(const Geometry& geo);

/// Integrates i dpsi/dt = H_eff(t) psi on the grid. Intervals violating the
/// step criterion are subdivided internally; states are recorded on the grid.
Trajectory propagate(const Geometry& geo, const TimeGrid& grid, const StateVector& psi0,
                     const PropagationOptions& opts = {});

/// Same stepper over an arbitrary monotone sequence of times (may decrease).
Trajectory propagate_times(const Geometry& geo, const std::vector<double>& times,
                           const StateVector& psi0, const PropagationOptions& opts = {});

using CouplingFn = std::function<CouplingSet(double)>;

/// Effective-space propagation for an arbitrary coupling schedule.
Trajectory propagate_couplings(const CouplingFn& couplings, const std::vector<double>& times,
                               const StateVector& psi0, const PropagationOptions& opts = {});

/// Full tensor-space propagation with dense exponentials. Uses the same
/// substep schedule as propagate(), so the two agree up to rounding.
Trajectory propagate_full(const Geometry& geo, const TimeGrid& grid, const StateVector& psi0_full,
                          const PropagationOptions& opts = {});

/// (1/sqrt N) * sum of the N single-g1 labels, photon vacuum.
StateVector w_state(int n_atoms);

struct RunMetrics {
    std::vector<double> final_populations;
    double w_fidelity = 0.0;
    double excited_exposure = 0.0;  // s
    double photon_exposure = 0.0;   // s
    double excited_exposure_fraction = 0.0;
    double photon_exposure_fraction = 0.0;
    double final_leakage = 0.0;          // excited + photon at t_f
    double max_transient_leakage = 0.0;  // max over grid of excited + photon
    double max_excited = 0.0;            // max over grid of excited only
    double min_dark_overlap = 1.0;
    double norm_drift = 0.0;
};

/// with_dark_overlap = false skips the per-time eigen-analysis and leaves
/// min_dark_overlap at 1.
RunMetrics run_metrics(const Trajectory& traj, const Geometry& geo, bool with_dark_overlap = true);

/// Trapezoid rule over (possibly non-uniform) samples.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wstate
