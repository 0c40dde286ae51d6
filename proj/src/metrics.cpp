#include "wstate/dynamics.hpp"
#include "wstate/spectral.hpp"

#include <algorithm>
#include <complex>

namespace wstate {

RunMetrics run_metrics(const Trajectory& traj, const Geometry& geo, bool with_dark_overlap) {
    const int n = geo.atoms;
    const std::size_t steps = traj.times.size();
    RunMetrics m;
    m.norm_drift = traj.norm_drift;

    const StateVector& final_state = traj.final_state();
    m.final_populations.resize(static_cast<std::size_t>(final_state.size()));
    for (Eigen::Index k = 0; k < final_state.size(); ++k) {
        m.final_populations[static_cast<std::size_t>(k)] = std::norm(final_state(k));
    }
    m.w_fidelity = std::clamp(std::norm(w_state(n).dot(final_state)), 0.0, 1.0);

    std::vector<double> excited(steps, 0.0);
    const std::vector<double>& photon = traj.populations[static_cast<std::size_t>(photon_index(n))];
    for (int i = 0; i < n; ++i) {
        const auto& p = traj.populations[static_cast<std::size_t>(excited_index(n, i))];
        for (std::size_t j = 0; j < steps; ++j) excited[j] += p[j];
    }
    for (std::size_t j = 0; j < steps; ++j) {
        m.max_excited = std::max(m.max_excited, excited[j]);
        m.max_transient_leakage = std::max(m.max_transient_leakage, excited[j] + photon[j]);
    }
    m.final_leakage = excited.back() + photon.back();

    m.excited_exposure = trapezoid(traj.times, excited);
    m.photon_exposure = trapezoid(traj.times, photon);
    const double window = std::abs(traj.times.back() - traj.times.front());
    m.excited_exposure_fraction = m.excited_exposure / window;
    m.photon_exposure_fraction = m.photon_exposure / window;

    if (with_dark_overlap) m.min_dark_overlap = min_over_active(dark_overlap_series(traj, geo), active_mask(traj.times, geo));
    return m;
}

}  // namespace wstate
