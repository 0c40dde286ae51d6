#pragma once

#include "wstate/dynamics.hpp"
#include "wstate/pulses.hpp"
#include "wstate/spectral.hpp"
#include "wstate/sweep.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wstate {

enum class Command { Simulate, Sweep, Diagnose };

std::string to_string(Command c);
Command parse_command(const std::string& text);

/// Configuration problem tied to a specific key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct RobustnessSpec {
    RobustParameter parameter = RobustParameter::Velocity;
    std::vector<double> factors;
    bool operator==(const RobustnessSpec&) const = default;
};

/// Everything needed to reproduce one run. All quantities in SI / rad/s.
struct RunConfig {
    std::optional<Command> command;
    Geometry geometry;
    std::size_t n_steps = 20000;
    std::string output_dir = "runs";
    PropagationOptions propagation;
    double null_tol = kDefaultNullTol;
    std::optional<AxisRange> sweep_z0;
    std::optional<AxisRange> sweep_d;
    std::size_t sweep_steps = 1000;
    std::optional<RobustnessSpec> robustness;

    bool operator==(const RunConfig& o) const;
};

/// Parses the flat `key = value` format. Blank lines and `#` comments are
/// ignored. Dimensional values carry a unit tag ("20 um", "2 m/s",
/// "20 MHz_cyclic", "20 v/W_L"). Throws ConfigError naming the key.
RunConfig parse_config(std::string_view text);

/// Canonical SI rendering; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& c);

/// "<value> <unit>" for a length, e.g. "31.9 um" -> 3.19e-5.
double parse_length(const std::string& key, const std::string& text);

/// "min:max:count [unit]" with lengths in `default_unit` when no unit is given.
AxisRange parse_axis(const std::string& key, const std::string& text, const std::string& default_unit = "um");

}  // namespace wstate
