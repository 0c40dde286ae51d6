#pragma once

#include "wstate/dynamics.hpp"
#include "wstate/model.hpp"
#include "wstate/pulses.hpp"

#include <optional>
#include <vector>

namespace wstate {

inline constexpr double kDefaultNullTol = 1e-8;

struct SpectralSnapshot {
    Eigen::VectorXd eigenvalues;  // ascending
    RealMatrix eigenvectors;      // columns match eigenvalues
    RealMatrix dark_subspace;     // orthonormal columns with |lambda| <= null_tol * norm
    double norm = 0.0;            // spectral norm, max |lambda|
    double gap = 0.0;             // smallest |lambda| outside the dark subspace
    bool gap_defined = false;     // false when every eigenvalue counts as dark

    Eigen::Index dark_dimension() const { return dark_subspace.cols(); }
};

SpectralSnapshot snapshot(const RealMatrix& h, double null_tol = kDefaultNullTol);

/// Closed-form zero-eigenvalue state of the symmetric configurations.
///   Scheme1: (1, r, ..., r | 0 | -Omega_1/G), r = Omega_1/Omega_2, requires
///            Omega_2 = ... = Omega_N and G_1 = ... = G_N (= G).
///   Scheme2: (1, ..., 1 | 0 | -Omega/G), requires equal Omega_i and equal G_i.
/// Throws std::invalid_argument if the symmetry does not hold or a
/// denominator vanishes.
StateVector analytic_dark_state(const CouplingSet& c, Scheme scheme);

/// Weight of psi in the numeric dark subspace of H(t) at every trajectory
/// time. Times with all couplings exactly zero report 1.
std::vector<double> dark_overlap_series(const Trajectory& traj, const Geometry& geo,
                                        double null_tol = kDefaultNullTol);

/// |<D_analytic(t)|psi(t)>|^2, or nullopt at times where the closed form does
/// not apply (symmetry broken or vanishing denominator).
std::vector<std::optional<double>> analytic_dark_overlap_series(const Trajectory& traj, const Geometry& geo);

/// Fraction of the peak used to decide where a pulse is "on".
inline constexpr double kActiveFraction = 1e-2;

/// Mask of trajectory times whose largest |coupling| is at least
/// kActiveFraction of the largest |coupling| over all the times.
std::vector<bool> active_mask(const std::vector<double>& times, const Geometry& geo);

/// Minimum of the series over the active times (1 if none are active).
double min_over_active(const std::vector<double>& series, const std::vector<bool>& mask);

struct FStirapCheck {
    double ratio_initial = 0.0;  // Omega_1/Omega_2 where Omega_2 first exceeds 1% of its peak
    double ratio_final = 0.0;    // Omega_1/Omega_2 where Omega_1 last exceeds 1% of its peak
    double g_dominance = 0.0;    // min of min(|G_1|,|G_2|)/max(|Omega_1|,|Omega_2|) while a laser is on
};

/// Scheme 1 only; throws std::invalid_argument for Scheme2.
FStirapCheck fstirap_condition_check(const Geometry& geo, std::size_t samples = 20001);

struct GapScan {
    double min_gap = 0.0;  // rad/s
    double time_at_min = 0.0;
    Eigen::Index max_dark_dimension = 0;
};

/// Smallest bright-state gap over times where the largest coupling exceeds 1%
/// of its peak on the window.
GapScan scan_gap(const Geometry& geo, std::size_t samples = 4001, double null_tol = kDefaultNullTol);

}  // namespace wstate
