#include "wstate/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wstate {

namespace {

bool all_equal(const std::vector<double>& x, std::size_t from, double scale) {
    for (std::size_t i = from + 1; i < x.size(); ++i) {
        if (std::abs(x[i] - x[from]) > 1e-12 * scale) return false;
    }
    return true;
}

}  // namespace

SpectralSnapshot snapshot(const RealMatrix& h, double null_tol) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
    SpectralSnapshot s;
    s.eigenvalues = es.eigenvalues();
    s.eigenvectors = es.eigenvectors();
    s.norm = s.eigenvalues.size() == 0 ? 0.0 : s.eigenvalues.cwiseAbs().maxCoeff();

    std::vector<Eigen::Index> dark;
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
        const double mag = std::abs(s.eigenvalues(k));
        if (mag <= null_tol * s.norm) {
            dark.push_back(k);
        } else {
            gap = std::min(gap, mag);
        }
    }
    s.dark_subspace.resize(h.rows(), static_cast<Eigen::Index>(dark.size()));
    for (std::size_t j = 0; j < dark.size(); ++j) {
        s.dark_subspace.col(static_cast<Eigen::Index>(j)) = s.eigenvectors.col(dark[j]);
    }
    s.gap_defined = std::isfinite(gap);
    s.gap = s.gap_defined ? gap : 0.0;
    return s;
}

StateVector analytic_dark_state(const CouplingSet& c, Scheme scheme) {
    c.validate();
    const int n = c.atoms();
    const double scale = std::max(c.max_abs(), std::numeric_limits<double>::min());
    if (!all_equal(c.g, 0, scale)) {
        throw std::invalid_argument("analytic dark state needs equal cavity couplings G_1 = ... = G_N");
    }
    const double g = c.g[0];
    if (g == 0.0) throw std::invalid_argument("analytic dark state undefined: cavity coupling G vanishes");

    StateVector d = StateVector::Zero(subspace_dim(n));
    if (scheme == Scheme::Scheme1) {
        if (!all_equal(c.omega, 1, scale)) {
            throw std::invalid_argument("scheme-1 dark state needs Omega_2 = ... = Omega_N");
        }
        if (c.omega[1] == 0.0) throw std::invalid_argument("scheme-1 dark state undefined: Omega_2 vanishes");
        const double r = c.omega[0] / c.omega[1];
        d(ground_index(0)) = 1.0;
        for (int i = 1; i < n; ++i) d(ground_index(i)) = r;
        d(photon_index(n)) = -c.omega[0] / g;
    } else {
        if (!all_equal(c.omega, 0, scale)) {
            throw std::invalid_argument("scheme-2 dark state needs Omega_1 = ... = Omega_N");
        }
        for (int i = 0; i < n; ++i) d(ground_index(i)) = 1.0;
        d(photon_index(n)) = -c.omega[0] / g;
    }
    return d / d.norm();
}

std::vector<double> dark_overlap_series(const Trajectory& traj, const Geometry& geo, double null_tol) {
    std::vector<double> out(traj.times.size(), 1.0);
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        const CouplingSet c = couplings_at(geo, traj.times[j]);
        if (c.max_abs() == 0.0) continue;
        const SpectralSnapshot s = snapshot(build_effective_hamiltonian(c), null_tol);
        const Eigen::VectorXcd proj = s.dark_subspace.transpose() * traj.states[j];
        out[j] = proj.squaredNorm();
    }
    return out;
}

std::vector<std::optional<double>> analytic_dark_overlap_series(const Trajectory& traj, const Geometry& geo) {
    std::vector<std::optional<double>> out(traj.times.size());
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        try {
            const StateVector d = analytic_dark_state(couplings_at(geo, traj.times[j]), geo.scheme);
            out[j] = std::norm(d.dot(traj.states[j]));
        } catch (const std::invalid_argument&) {
            // closed form not applicable here
        }
    }
    return out;
}

std::vector<bool> active_mask(const std::vector<double>& times, const Geometry& geo) {
    std::vector<double> peak(times.size());
    double top = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        peak[j] = couplings_at(geo, times[j]).max_abs();
        top = std::max(top, peak[j]);
    }
    std::vector<bool> mask(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) mask[j] = top > 0.0 && peak[j] >= kActiveFraction * top;
    return mask;
}

double min_over_active(const std::vector<double>& series, const std::vector<bool>& mask) {
    double m = 1.0;
    for (std::size_t j = 0; j < series.size(); ++j) {
        if (mask[j]) m = std::min(m, series[j]);
    }
    return m;
}

FStirapCheck fstirap_condition_check(const Geometry& geo, std::size_t samples) {
    if (geo.scheme != Scheme::Scheme1) {
        throw std::invalid_argument("f-STIRAP conditions apply to scheme1 geometries only");
    }
    const std::vector<double> times = make_time_grid(geo, samples).times();
    std::vector<CouplingSet> cs;
    cs.reserve(times.size());
    double peak1 = 0.0, peak2 = 0.0, peak_laser = 0.0;
    for (double t : times) {
        cs.push_back(couplings_at(geo, t));
        peak1 = std::max(peak1, std::abs(cs.back().omega[0]));
        peak2 = std::max(peak2, std::abs(cs.back().omega[1]));
    }
    peak_laser = std::max(peak1, peak2);

    FStirapCheck out;
    auto ratio = [](const CouplingSet& c) { return c.omega[1] == 0.0 ? 0.0 : c.omega[0] / c.omega[1]; };
    for (const CouplingSet& c : cs) {
        if (std::abs(c.omega[1]) > kActiveFraction * peak2) {
            out.ratio_initial = ratio(c);
            break;
        }
    }
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
        if (std::abs(it->omega[0]) > kActiveFraction * peak1) {
            out.ratio_final = ratio(*it);
            break;
        }
    }
    double dominance = std::numeric_limits<double>::infinity();
    for (const CouplingSet& c : cs) {
        const double laser = std::max(std::abs(c.omega[0]), std::abs(c.omega[1]));
        if (laser > kActiveFraction * peak_laser) {
            dominance = std::min(dominance, std::min(std::abs(c.g[0]), std::abs(c.g[1])) / laser);
        }
    }
    out.g_dominance = std::isfinite(dominance) ? dominance : 0.0;
    return out;
}

GapScan scan_gap(const Geometry& geo, std::size_t samples, double null_tol) {
    const std::vector<double> times = make_time_grid(geo, samples).times();
    const std::vector<bool> mask = active_mask(times, geo);
    GapScan out;
    out.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (!mask[j]) continue;
        const SpectralSnapshot s = snapshot(build_effective_hamiltonian(couplings_at(geo, times[j])), null_tol);
        out.max_dark_dimension = std::max(out.max_dark_dimension, s.dark_dimension());
        if (s.gap_defined && s.gap < out.min_gap) {
            out.min_gap = s.gap;
            out.time_at_min = times[j];
        }
    }
    if (!std::isfinite(out.min_gap)) out.min_gap = 0.0;
    return out;
}

}  // namespace wstate
