#pragma once

#include "wstate/config.hpp"

#include "json.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace wstate {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNotFound = 3, kExitIo = 4 };

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fixed notation carrying 12 significant digits ("0" for zero).
std::string format_fixed12(double x);

/// trajectory.csv + metrics.json. Returns the metrics document.
nlohmann::json cmd_simulate(const RunConfig& config, const std::filesystem::path& out_dir);

/// grid.csv + working_point.json. Throws WorkingPointNotFound after writing
/// both files when no cell meets the leakage constraint.
nlohmann::json cmd_sweep(const RunConfig& config, const std::filesystem::path& out_dir);

/// diagnostics.json.
nlohmann::json cmd_diagnose(const RunConfig& config, const std::filesystem::path& out_dir);

nlohmann::json to_json(const RunMetrics& m, int n_atoms);
nlohmann::json to_json(const AdiabaticityReport& r);
nlohmann::json to_json(const SweepCell& c);

/// Header and rows of trajectory.csv.
std::string trajectory_csv(const Trajectory& traj, const std::vector<double>& dark_overlap, int n_atoms);
/// Header and rows of grid.csv.
std::string grid_csv(const SweepGrid& grid);

}  // namespace wstate
