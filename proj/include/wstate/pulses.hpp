#pragma once

#include "wstate/model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace wstate {

enum class Scheme { Scheme1, Scheme2 };

std::string to_string(Scheme s);
/// Accepts "scheme1"/"1" and "scheme2"/"2" (case-insensitive).
Scheme parse_scheme(const std::string& text);

/// Cavity/laser/atom arrangement for one scheme. SI units throughout; Rabi
/// frequencies in rad/s.
///
/// Scheme 1: atom 1 travels along z = z0 towards +x; atoms 2..N travel along
/// z = 0 in the opposite direction. The laser axis sits at x = d from the
/// cavity centre. Scheme 2: all atoms travel together along z = z0 and meet
/// the laser (offset -d) before the cavity.
struct Geometry {
    Scheme scheme = Scheme::Scheme1;
    int atoms = 3;
    double v = 0.0;             // m/s
    double waist_laser = 0.0;   // W_L, m
    double waist_cavity = 0.0;  // W_C, m
    double wavelength = 0.0;    // m
    double omega0 = 0.0;        // peak laser Rabi frequency, rad/s
    double g0 = 0.0;            // peak cavity Rabi frequency, rad/s
    double z0 = 0.0;            // m
    double d = 0.0;             // m
    double t_span = 4.0;        // half-window in units of (max waist + d)/v

    // Optional bare frequencies (rad/s), only used for the resonant-approximation check.
    std::optional<double> atomic_frequency;
    std::optional<double> cavity_frequency;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    bool operator==(const Geometry&) const = default;
};

/// Instantaneous couplings for the scheme's trajectories; t = 0 is when the
/// atoms cross the cavity centre.
CouplingSet couplings_at(const Geometry& geo, double t);

/// Uniform grid t_i = -t_f ... t_f with n_steps points.
struct TimeGrid {
    double t_initial = 0.0;
    double t_final = 0.0;
    std::size_t n_steps = 0;

    double spacing() const { return (t_final - t_initial) / static_cast<double>(n_steps - 1); }
    double at(std::size_t k) const {
        return k + 1 == n_steps ? t_final : t_initial + spacing() * static_cast<double>(k);
    }
    std::vector<double> times() const;
};

inline constexpr std::size_t kMinGridSteps = 100;

/// t_f = -t_i = t_span * (max(W_C, W_L) + d) / v.
TimeGrid make_time_grid(const Geometry& geo, std::size_t n_steps);

struct AdiabaticityReport {
    double omega_area = 0.0;  // |Omega0| * W_L / v
    double g_area = 0.0;      // |G0| * W_C / v
    bool warning = false;     // either area below kAreaWarning
    std::optional<bool> rwa_ok;
    double rwa_ratio = 0.0;   // max(|Omega0|,|G0|) / min(omega_e, omega_C) when available
};

inline constexpr double kAreaWarning = 10.0;
inline constexpr double kRwaRatioLimit = 1e-2;

AdiabaticityReport adiabaticity_report(const Geometry& geo);

}  // namespace wstate
