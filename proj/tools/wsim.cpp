// wsim: simulate / sweep / diagnose the cavity-laser W-state passage.

#include "wstate/commands.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace wstate;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Fresh per-run directory so concurrent invocations never share files.
fs::path default_out_dir(const RunConfig& config, Command command) {
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", std::gmtime(&now));
    return fs::path(config.output_dir) / (to_string(command) + "-" + stamp + "-" + std::to_string(::getpid()));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adiabatic-passage W-state simulator for three atoms crossing a cavity and a laser"};
    app.require_subcommand(1);

    std::string config_path, out_dir, z0_spec, d_spec;
    std::size_t steps = 0;

    auto* simulate = app.add_subcommand("simulate", "Propagate one run; writes trajectory.csv and metrics.json");
    simulate->add_option("--config", config_path, "Run configuration file")->required();
    simulate->add_option("--out", out_dir, "Output directory");
    simulate->add_option("--steps", steps, "Number of grid points (overrides n_steps)");

    auto* sweep = app.add_subcommand("sweep", "Scheme-1 (z0, d) scan; writes grid.csv and working_point.json");
    sweep->add_option("--config", config_path, "Run configuration file")->required();
    sweep->add_option("--z0", z0_spec, "z0 axis as min:max:n (um unless a unit follows)");
    sweep->add_option("--d", d_spec, "d axis as min:max:n (um unless a unit follows)");
    sweep->add_option("--out", out_dir, "Output directory");
    sweep->add_option("--steps", steps, "Grid points per cell (overrides sweep_steps)");

    auto* diagnose = app.add_subcommand("diagnose", "Adiabaticity and spectral diagnostics; writes diagnostics.json");
    diagnose->add_option("--config", config_path, "Run configuration file")->required();
    diagnose->add_option("--out", out_dir, "Output directory");
    diagnose->add_option("--steps", steps, "Number of grid points (overrides n_steps)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    const Command command = simulate->parsed() ? Command::Simulate
                            : sweep->parsed()  ? Command::Sweep
                                               : Command::Diagnose;
    try {
        RunConfig config = parse_config(read_file(config_path));
        if (config.command && *config.command != command) {
            throw ConfigError("command", "config is for '" + to_string(*config.command) + "', invoked as '" +
                                             to_string(command) + "'");
        }
        config.command = command;
        if (!z0_spec.empty()) config.sweep_z0 = parse_axis("--z0", z0_spec);
        if (!d_spec.empty()) config.sweep_d = parse_axis("--d", d_spec);
        if (steps != 0) {
            if (steps < kMinGridSteps) throw ConfigError("--steps", "must be >= 100");
            (command == Command::Sweep ? config.sweep_steps : config.n_steps) = steps;
        }
        const fs::path out = out_dir.empty() ? default_out_dir(config, command) : fs::path(out_dir);

        nlohmann::json doc;
        switch (command) {
            case Command::Simulate: doc = cmd_simulate(config, out); break;
            case Command::Sweep: doc = cmd_sweep(config, out); break;
            case Command::Diagnose: doc = cmd_diagnose(config, out); break;
        }
        std::cout << "wrote " << out.string() << "\n";
        if (command == Command::Simulate) {
            std::cout << "w_fidelity " << doc["w_fidelity"].get<double>() << ", final_leakage "
                      << doc["final_leakage"].get<double>() << "\n";
        } else if (command == Command::Sweep) {
            std::cout << "working point z0 = " << doc["z0_um"].get<double>() << " um, d = " << doc["d_um"].get<double>()
                      << " um\n";
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const WorkingPointNotFound& e) {
        std::cerr << e.what() << "; best cell z0 = " << e.best().z0 * 1e6 << " um, d = " << e.best().d * 1e6
                  << " um, leakage " << e.best().leakage_final << "\n";
        return kExitNotFound;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
}
