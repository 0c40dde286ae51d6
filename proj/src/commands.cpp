#include "wstate/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace wstate {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

json provenance(const RunConfig& config, Command command, Clock::time_point start) {
    RunConfig echo = config;
    echo.command = command;
    return json{{"command", to_string(command)},
                {"artifact_version", kVersion},
                {"config", render_config(echo)},
                {"wall_time_s", std::chrono::duration<double>(Clock::now() - start).count()}};
}

json stepper_json(const PropagationOptions& opts, std::size_t n_steps, const Trajectory* traj) {
    json j{{"stepper", to_string(opts.stepper)}, {"step_criterion", opts.step_criterion}, {"n_steps", n_steps}};
    if (traj != nullptr) {
        j["substeps"] = traj->substeps;
        j["max_step_norm"] = traj->max_step_norm;
    }
    return j;
}

}  // namespace

std::string format_fixed12(double x) {
    if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? "0" : (std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf"));
    const int exponent = static_cast<int>(std::floor(std::log10(std::abs(x))));
    const int decimals = std::clamp(11 - exponent, 0, 40);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

json to_json(const RunMetrics& m, int n_atoms) {
    const auto basis = canonical_basis(n_atoms);
    json finals = json::object();
    for (std::size_t k = 0; k < basis.size(); ++k) finals[basis[k].name()] = m.final_populations[k];
    return json{{"final_populations", finals},
                {"w_fidelity", m.w_fidelity},
                {"excited_exposure_s", m.excited_exposure},
                {"photon_exposure_s", m.photon_exposure},
                {"excited_exposure_fraction", m.excited_exposure_fraction},
                {"photon_exposure_fraction", m.photon_exposure_fraction},
                {"final_leakage", m.final_leakage},
                {"max_transient_leakage", m.max_transient_leakage},
                {"max_excited", m.max_excited},
                {"min_dark_overlap", m.min_dark_overlap},
                {"norm_drift", m.norm_drift}};
}

json to_json(const AdiabaticityReport& r) {
    json j{{"omega_area", r.omega_area}, {"g_area", r.g_area}, {"warning", r.warning},
           {"warning_threshold", kAreaWarning}};
    if (r.rwa_ok) {
        j["rwa_ok"] = *r.rwa_ok;
        j["rwa_ratio"] = r.rwa_ratio;
    }
    return j;
}

json to_json(const SweepCell& c) {
    return json{{"z0_m", c.z0},
                {"d_m", c.d},
                {"final_populations", c.final_populations},
                {"w_fidelity", c.w_fidelity},
                {"dev_p0", c.dev_p0},
                {"max_w_deviation", c.max_w_deviation},
                {"leakage_final", c.leakage_final},
                {"max_transient_leakage", c.max_transient_leakage},
                {"excited_exposure_s", c.excited_exposure},
                {"photon_exposure_s", c.photon_exposure}};
}

std::string trajectory_csv(const Trajectory& traj, const std::vector<double>& dark_overlap, int n_atoms) {
    const auto basis = canonical_basis(n_atoms);
    std::string out = "time_us";
    for (const auto& label : basis) out += ",p_" + label.name();
    out += ",dark_overlap,norm\n";
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        out += format_fixed12(traj.times[j] * 1e6);
        for (std::size_t k = 0; k < basis.size(); ++k) {
            out += ',';
            out += format_fixed12(traj.populations[k][j]);
        }
        out += ',';
        out += format_fixed12(dark_overlap[j]);
        out += ',';
        out += format_fixed12(traj.states[j].norm());
        out += '\n';
    }
    return out;
}

std::string grid_csv(const SweepGrid& grid) {
    std::string out = "z0_um,d_um,dev_p0,leakage_final,w_fidelity,max_transient_leakage\n";
    for (const SweepCell& c : grid.cells) {
        for (double x : {c.z0 * 1e6, c.d * 1e6, c.dev_p0, c.leakage_final, c.w_fidelity}) {
            out += format_fixed12(x);
            out += ',';
        }
        out += format_fixed12(c.max_transient_leakage);
        out += '\n';
    }
    return out;
}

json cmd_simulate(const RunConfig& config, const fs::path& out_dir) {
    const auto start = Clock::now();
    const Geometry& geo = config.geometry;
    ensure_dir(out_dir);

    const TimeGrid grid = make_time_grid(geo, config.n_steps);
    const Trajectory traj = propagate(geo, grid, initial_state(geo), config.propagation);
    const std::vector<double> overlap = dark_overlap_series(traj, geo, config.null_tol);
    RunMetrics metrics = run_metrics(traj, geo, false);
    metrics.min_dark_overlap = min_over_active(overlap, active_mask(traj.times, geo));

    write_file(out_dir / "trajectory.csv", trajectory_csv(traj, overlap, geo.atoms));

    json doc = to_json(metrics, geo.atoms);
    doc["adiabaticity"] = to_json(adiabaticity_report(geo));
    doc["stepper"] = stepper_json(config.propagation, config.n_steps, &traj);
    doc["dark_overlap_convention"] =
        "minimum over times where the largest coupling is at least 1% of its window maximum; "
        "times with all couplings zero count as fully dark";
    doc["provenance"] = provenance(config, Command::Simulate, start);
    write_file(out_dir / "metrics.json", doc.dump(2) + "\n");
    return doc;
}

json cmd_sweep(const RunConfig& config, const fs::path& out_dir) {
    const auto start = Clock::now();
    const Geometry& geo = config.geometry;
    if (geo.scheme != Scheme::Scheme1) {
        throw ConfigError("scheme", "the (z0, d) sweep is defined for scheme1 only");
    }
    if (!config.sweep_z0) throw ConfigError("sweep_z0", "sweep range required (config key or --z0)");
    if (!config.sweep_d) throw ConfigError("sweep_d", "sweep range required (config key or --d)");
    ensure_dir(out_dir);

    SweepOptions opts;
    opts.n_steps = config.sweep_steps;
    opts.propagation = config.propagation;
    const SweepGrid grid = run_sweep(geo, *config.sweep_z0, *config.sweep_d, opts);
    write_file(out_dir / "grid.csv", grid_csv(grid));

    json doc;
    try {
        const WorkingPoint wp = find_working_point(grid);
        doc = json{{"status", "found"}, {"z0_m", wp.z0}, {"d_m", wp.d}, {"z0_um", wp.z0 * 1e6},
                   {"d_um", wp.d * 1e6}, {"metrics", to_json(wp.cell)}};
    } catch (const WorkingPointNotFound& e) {
        doc = json{{"status", "not_found"}, {"best_unconstrained", to_json(e.best())}};
        doc["leakage_limit"] = kWorkingPointLeakage;
        doc["provenance"] = provenance(config, Command::Sweep, start);
        write_file(out_dir / "working_point.json", doc.dump(2) + "\n");
        throw;
    }
    doc["leakage_limit"] = kWorkingPointLeakage;
    doc["provenance"] = provenance(config, Command::Sweep, start);
    write_file(out_dir / "working_point.json", doc.dump(2) + "\n");
    return doc;
}

json cmd_diagnose(const RunConfig& config, const fs::path& out_dir) {
    const auto start = Clock::now();
    const Geometry& geo = config.geometry;
    ensure_dir(out_dir);

    json doc;
    doc["adiabaticity"] = to_json(adiabaticity_report(geo));

    if (geo.scheme == Scheme::Scheme1) {
        const FStirapCheck f = fstirap_condition_check(geo);
        doc["fstirap"] = json{{"ratio_initial", f.ratio_initial},
                              {"ratio_final", f.ratio_final},
                              {"g_dominance", f.g_dominance}};
    } else {
        // Pulse order read off the sampled couplings.
        const std::vector<double> times = make_time_grid(geo, 20001).times();
        double best_laser = -1.0, best_cavity = -1.0, t_laser = 0.0, t_cavity = 0.0;
        for (double t : times) {
            const CouplingSet c = couplings_at(geo, t);
            if (std::abs(c.omega[0]) > best_laser) best_laser = std::abs(c.omega[0]), t_laser = t;
            if (std::abs(c.g[0]) > best_cavity) best_cavity = std::abs(c.g[0]), t_cavity = t;
        }
        doc["multilevel_stirap"] = json{{"laser_peak_time_us", t_laser * 1e6},
                                        {"cavity_peak_time_us", t_cavity * 1e6},
                                        {"laser_precedes_cavity", t_laser < t_cavity}};
    }

    const GapScan gap = scan_gap(geo, 4001, config.null_tol);
    doc["spectral"] = json{{"min_gap_rad_s", gap.min_gap},
                           {"time_at_min_gap_us", gap.time_at_min * 1e6},
                           {"max_dark_dimension", gap.max_dark_dimension},
                           {"null_tol", config.null_tol}};

    const Trajectory traj = propagate(geo, make_time_grid(geo, config.n_steps), initial_state(geo), config.propagation);
    doc["stepper"] = stepper_json(config.propagation, config.n_steps, &traj);

    if (config.robustness) {
        const auto& spec = *config.robustness;
        const auto runs = robustness_scan(geo, spec.parameter, spec.factors, config.n_steps, config.propagation);
        json rows = json::array();
        for (std::size_t k = 0; k < runs.size(); ++k) {
            rows.push_back(json{{"factor", spec.factors[k]}, {"metrics", to_json(runs[k], geo.atoms)}});
        }
        doc["robustness"] = json{{"parameter", to_string(spec.parameter)}, {"runs", rows}};
    }

    doc["provenance"] = provenance(config, Command::Diagnose, start);
    write_file(out_dir / "diagnostics.json", doc.dump(2) + "\n");
    return doc;
}

}  // namespace wstate
