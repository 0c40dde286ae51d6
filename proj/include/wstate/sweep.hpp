#pragma once

#include "wstate/dynamics.hpp"
#include "wstate/pulses.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wstate {

/// Inclusive, evenly spaced axis [min, max] with `count` samples.
struct AxisRange {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;

    std::vector<double> values() const;
    bool operator==(const AxisRange&) const = default;
};

inline constexpr std::size_t kMinSweepResolution = 8;

struct SweepCell {
    double z0 = 0.0;
    double d = 0.0;
    std::vector<double> final_populations;
    double w_fidelity = 0.0;
    double dev_p0 = 0.0;            // |1/N - P(index 0)|
    double max_w_deviation = 0.0;   // max over g1-labels of |P - 1/N|
    double leakage_final = 0.0;     // excited + photon at t_f
    double max_transient_leakage = 0.0;
    double excited_exposure = 0.0;  // s
    double photon_exposure = 0.0;   // s
    double population_sum = 0.0;

    bool operator==(const SweepCell&) const = default;
};

/// Row-major over (z0, d): cells[i * d_values.size() + j].
struct SweepGrid {
    std::vector<double> z0_values;
    std::vector<double> d_values;
    std::vector<SweepCell> cells;

    const SweepCell& at(std::size_t i, std::size_t j) const { return cells[i * d_values.size() + j]; }
};

struct SweepOptions {
    std::size_t n_steps = 1000;
    PropagationOptions propagation;
    /// 0 means SIM_THREADS if set, otherwise all hardware threads.
    std::size_t threads = 0;
};

/// Worker count from SIM_THREADS, falling back to the hardware concurrency.
std::size_t default_thread_count();

/// Propagates the scheme-1 initial state for a single (z0, d).
SweepCell evaluate_cell(const Geometry& base, double z0, double d, const SweepOptions& opts);

/// Scheme-1 scan over z0 x d. Cells are independent and written to disjoint
/// slots, so the result does not depend on the thread count.
SweepGrid run_sweep(const Geometry& base, const AxisRange& z0_range, const AxisRange& d_range,
                    const SweepOptions& opts = {});

inline constexpr double kWorkingPointLeakage = 0.02;

struct WorkingPoint {
    double z0 = 0.0;
    double d = 0.0;
    SweepCell cell;
};

class WorkingPointNotFound : public std::runtime_error {
public:
    explicit WorkingPointNotFound(SweepCell best)
        : std::runtime_error("no sweep cell satisfies the leakage constraint"), best_(std::move(best)) {}
    const SweepCell& best() const { return best_; }

private:
    SweepCell best_;
};

/// Cell minimizing max_w_deviation subject to leakage_final <= leakage_limit;
/// ties go to smaller leakage, then smaller z0, then smaller d.
WorkingPoint find_working_point(const SweepGrid& grid, double leakage_limit = kWorkingPointLeakage);

enum class RobustParameter { Velocity, Omega0, G0, Couplings };

std::string to_string(RobustParameter p);
RobustParameter parse_robust_parameter(const std::string& text);

/// Scales the named parameter (Couplings scales Omega0 and G0 together) by
/// each factor, regenerates the time grid and reruns the scheme.
std::vector<RunMetrics> robustness_scan(const Geometry& geo, RobustParameter parameter,
                                        std::span<const double> factors, std::size_t n_steps,
                                        const PropagationOptions& opts = {});

}  // namespace wstate
