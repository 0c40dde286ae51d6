#include "wstate/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace wstate {

std::vector<double> AxisRange::values() const {
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        out[k] = k + 1 == count ? max : min + (max - min) * static_cast<double>(k) / static_cast<double>(count - 1);
    }
    return out;
}

std::size_t default_thread_count() {
    if (const char* env = std::getenv("SIM_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

void check_axis(const AxisRange& r, const char* name) {
    if (!(std::isfinite(r.min) && std::isfinite(r.max)) || r.min < 0.0 || r.max <= r.min) {
        throw std::invalid_argument(std::string(name) + " range must satisfy 0 <= min < max");
    }
    if (r.count < kMinSweepResolution) {
        throw std::invalid_argument(std::string(name) + " resolution must be >= " +
                                    std::to_string(kMinSweepResolution));
    }
}

}  // namespace

SweepCell evaluate_cell(const Geometry& base, double z0, double d, const SweepOptions& opts) {
    Geometry geo = base;
    geo.z0 = z0;
    geo.d = d;
    const Trajectory traj = propagate(geo, make_time_grid(geo, opts.n_steps), initial_state(geo), opts.propagation);
    const RunMetrics m = run_metrics(traj, geo, false);

    const int n = geo.atoms;
    const double target = 1.0 / static_cast<double>(n);
    SweepCell cell;
    cell.z0 = z0;
    cell.d = d;
    cell.final_populations = m.final_populations;
    cell.w_fidelity = m.w_fidelity;
    cell.dev_p0 = std::abs(target - m.final_populations[0]);
    for (int i = 0; i < n; ++i) {
        cell.max_w_deviation =
            std::max(cell.max_w_deviation, std::abs(m.final_populations[static_cast<std::size_t>(ground_index(i))] - target));
    }
    cell.leakage_final = m.final_leakage;
    cell.max_transient_leakage = m.max_transient_leakage;
    cell.excited_exposure = m.excited_exposure;
    cell.photon_exposure = m.photon_exposure;
    for (double p : m.final_populations) cell.population_sum += p;
    return cell;
}

SweepGrid run_sweep(const Geometry& base, const AxisRange& z0_range, const AxisRange& d_range,
                    const SweepOptions& opts) {
    base.validate();
    if (base.scheme != Scheme::Scheme1) {
        throw std::invalid_argument("sweeps over (z0, d) are defined for scheme1 only");
    }
    check_axis(z0_range, "z0");
    check_axis(d_range, "d");

    SweepGrid grid;
    grid.z0_values = z0_range.values();
    grid.d_values = d_range.values();
    const std::size_t total = grid.z0_values.size() * grid.d_values.size();
    grid.cells.resize(total);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < total; k = next++) {
            const std::size_t i = k / grid.d_values.size();
            const std::size_t j = k % grid.d_values.size();
            grid.cells[k] = evaluate_cell(base, grid.z0_values[i], grid.d_values[j], opts);
        }
    };

    const std::size_t threads = std::min(total, opts.threads > 0 ? opts.threads : default_thread_count());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return grid;
}

WorkingPoint find_working_point(const SweepGrid& grid, double leakage_limit) {
    if (grid.cells.empty()) throw std::invalid_argument("empty sweep grid");

    auto better = [](const SweepCell& a, const SweepCell& b) {
        if (a.max_w_deviation != b.max_w_deviation) return a.max_w_deviation < b.max_w_deviation;
        if (a.leakage_final != b.leakage_final) return a.leakage_final < b.leakage_final;
        if (a.z0 != b.z0) return a.z0 < b.z0;
        return a.d < b.d;
    };

    const SweepCell* best = nullptr;
    const SweepCell* best_any = &grid.cells.front();
    for (const SweepCell& c : grid.cells) {
        if (better(c, *best_any)) best_any = &c;
        if (c.leakage_final <= leakage_limit && (best == nullptr || better(c, *best))) best = &c;
    }
    if (best == nullptr) throw WorkingPointNotFound(*best_any);
    return WorkingPoint{best->z0, best->d, *best};
}

std::string to_string(RobustParameter p) {
    switch (p) {
        case RobustParameter::Velocity: return "v";
        case RobustParameter::Omega0: return "Omega0";
        case RobustParameter::G0: return "G0";
        case RobustParameter::Couplings: return "couplings";
    }
    return "?";
}

RobustParameter parse_robust_parameter(const std::string& text) {
    if (text == "v") return RobustParameter::Velocity;
    if (text == "Omega0") return RobustParameter::Omega0;
    if (text == "G0") return RobustParameter::G0;
    if (text == "couplings") return RobustParameter::Couplings;
    throw std::invalid_argument("robust_parameter: expected v, Omega0, G0 or couplings, got '" + text + "'");
}

std::vector<RunMetrics> robustness_scan(const Geometry& geo, RobustParameter parameter,
                                        std::span<const double> factors, std::size_t n_steps,
                                        const PropagationOptions& opts) {
    std::vector<RunMetrics> out;
    out.reserve(factors.size());
    for (double f : factors) {
        if (!(f > 0.0) || !std::isfinite(f)) throw std::invalid_argument("robustness factors must be positive");
        Geometry g = geo;
        switch (parameter) {
            case RobustParameter::Velocity: g.v *= f; break;
            case RobustParameter::Omega0: g.omega0 *= f; break;
            case RobustParameter::G0: g.g0 *= f; break;
            case RobustParameter::Couplings:
                g.omega0 *= f;
                g.g0 *= f;
                break;
        }
        const Trajectory traj = propagate(g, make_time_grid(g, n_steps), initial_state(g), opts);
        out.push_back(run_metrics(traj, g));
    }
    return out;
}

}  // namespace wstate
