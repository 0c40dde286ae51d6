#include "wstate/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace wstate {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
        throw ConfigError(key, "expected a number, got '" + text + "'");
    }
    return value;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
    }
    return value;
}

// Splits "<number> <unit>"; the unit is mandatory.
std::pair<double, std::string> split_quantity(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    const auto space = t.find_first_of(" \t");
    if (space == std::string::npos) throw ConfigError(key, "missing unit tag in '" + text + "'");
    return {parse_number(key, t.substr(0, space)), trim(t.substr(space))};
}

const std::map<std::string, double>& length_units() {
    static const std::map<std::string, double> units{
        {"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"\xC2\xB5m", 1e-6}, {"nm", 1e-9}};
    return units;
}

const std::map<std::string, double>& speed_units() {
    static const std::map<std::string, double> units{
        {"m/s", 1.0}, {"mm/s", 1e-3}, {"um/s", 1e-6}, {"cm/s", 1e-2}, {"km/s", 1e3}};
    return units;
}

const std::map<std::string, double>& frequency_units() {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    static const std::map<std::string, double> units{
        {"rad/s", 1.0},
        {"Hz_angular", 1.0},         {"Hz_cyclic", two_pi},
        {"kHz_angular", 1e3},        {"kHz_cyclic", two_pi * 1e3},
        {"MHz_angular", 1e6},        {"MHz_cyclic", two_pi * 1e6},
        {"GHz_angular", 1e9},        {"GHz_cyclic", two_pi * 1e9},
    };
    return units;
}

double scaled(const std::string& key, const std::string& text, const std::map<std::string, double>& units,
              const char* kind) {
    const auto [value, unit] = split_quantity(key, text);
    const auto it = units.find(unit);
    if (it == units.end()) throw ConfigError(key, "unknown " + std::string(kind) + " unit '" + unit + "'");
    return value * it->second;
}

// Frequencies may also be given in units of v/W_L or v/W_C (inverse transit
// times), resolved once speed and waists are known.
struct PendingFrequency {
    double value = 0.0;
    std::string unit;  // empty when already absolute
};

PendingFrequency parse_frequency(const std::string& key, const std::string& text) {
    const auto [value, unit] = split_quantity(key, text);
    if (unit == "v/W_L" || unit == "v/W_C") return {value, unit};
    const auto it = frequency_units().find(unit);
    if (it == frequency_units().end()) throw ConfigError(key, "unknown frequency unit '" + unit + "'");
    return {value * it->second, {}};
}

double resolve(const PendingFrequency& f, const Geometry& g) {
    if (f.unit == "v/W_L") return f.value * g.v / g.waist_laser;
    if (f.unit == "v/W_C") return f.value * g.v / g.waist_cavity;
    return f.value;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const std::set<std::string>& required_keys() {
    static const std::set<std::string> keys{"scheme", "v", "W_L", "W_C", "lambda", "Omega0", "G0", "z0", "d"};
    return keys;
}

const std::set<std::string>& optional_keys() {
    static const std::set<std::string> keys{
        "command",     "atoms",       "t_span",      "n_steps",          "output_dir",      "stepper",
        "step_criterion", "null_tol", "sweep_z0",    "sweep_d",          "sweep_steps",     "robust_parameter",
        "robust_factors", "omega_e",  "omega_c"};
    return keys;
}

}  // namespace

std::string to_string(Command c) {
    switch (c) {
        case Command::Simulate: return "simulate";
        case Command::Sweep: return "sweep";
        case Command::Diagnose: return "diagnose";
    }
    return "?";
}

Command parse_command(const std::string& text) {
    if (text == "simulate") return Command::Simulate;
    if (text == "sweep") return Command::Sweep;
    if (text == "diagnose") return Command::Diagnose;
    throw ConfigError("command", "expected simulate, sweep or diagnose, got '" + text + "'");
}

bool RunConfig::operator==(const RunConfig& o) const {
    return command == o.command && geometry == o.geometry && n_steps == o.n_steps && output_dir == o.output_dir &&
           propagation.stepper == o.propagation.stepper && propagation.step_criterion == o.propagation.step_criterion &&
           null_tol == o.null_tol && sweep_z0 == o.sweep_z0 && sweep_d == o.sweep_d && sweep_steps == o.sweep_steps &&
           robustness == o.robustness;
}

double parse_length(const std::string& key, const std::string& text) {
    return scaled(key, text, length_units(), "length");
}

AxisRange parse_axis(const std::string& key, const std::string& text, const std::string& default_unit) {
    std::string t = trim(text);
    std::string unit = default_unit;
    if (const auto space = t.find_first_of(" \t"); space != std::string::npos) {
        unit = trim(t.substr(space));
        t = t.substr(0, space);
    }
    const auto it = length_units().find(unit);
    if (it == length_units().end()) throw ConfigError(key, "unknown length unit '" + unit + "'");

    const auto c1 = t.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : t.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ConfigError(key, "expected min:max:count, got '" + text + "'");
    AxisRange r;
    r.min = parse_number(key, t.substr(0, c1)) * it->second;
    r.max = parse_number(key, t.substr(c1 + 1, c2 - c1 - 1)) * it->second;
    r.count = parse_count(key, t.substr(c2 + 1));
    if (r.min < 0.0 || r.max <= r.min) throw ConfigError(key, "range must satisfy 0 <= min < max");
    if (r.count < kMinSweepResolution) {
        throw ConfigError(key, "resolution must be >= " + std::to_string(kMinSweepResolution));
    }
    return r;
}

RunConfig parse_config(std::string_view text) {
    std::map<std::string, std::string> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (!required_keys().contains(key) && !optional_keys().contains(key)) {
            throw ConfigError(key, "unknown key");
        }
        if (!entries.emplace(key, value).second) throw ConfigError(key, "duplicate key");
        if (value.empty()) throw ConfigError(key, "empty value");
    }
    for (const auto& key : required_keys()) {
        if (!entries.contains(key)) throw ConfigError(key, "missing required key");
    }
    auto has = [&](const char* k) { return entries.contains(k); };
    auto get = [&](const char* k) { return entries.at(k); };

    RunConfig c;
    Geometry& g = c.geometry;
    if (has("command")) c.command = parse_command(get("command"));
    try {
        g.scheme = parse_scheme(get("scheme"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("scheme", e.what());
    }
    if (has("atoms")) g.atoms = static_cast<int>(parse_count("atoms", get("atoms")));
    g.v = scaled("v", get("v"), speed_units(), "speed");
    g.waist_laser = parse_length("W_L", get("W_L"));
    g.waist_cavity = parse_length("W_C", get("W_C"));
    g.wavelength = parse_length("lambda", get("lambda"));
    g.z0 = parse_length("z0", get("z0"));
    g.d = parse_length("d", get("d"));
    if (has("t_span")) g.t_span = parse_number("t_span", get("t_span"));

    // Check the quantities frequencies may refer to before resolving them.
    auto check = [&](bool ok, const char* key, const char* what) {
        if (!ok) throw ConfigError(key, what);
    };
    check(g.atoms >= 2, "atoms", "must be >= 2");
    check(g.v > 0.0, "v", "must be positive");
    check(g.waist_laser > 0.0, "W_L", "must be positive");
    check(g.waist_cavity > 0.0, "W_C", "must be positive");
    check(g.wavelength > 0.0, "lambda", "must be positive");
    check(g.z0 >= 0.0, "z0", "must be >= 0");
    check(g.d >= 0.0, "d", "must be >= 0");
    check(g.t_span > 0.0, "t_span", "must be positive");

    g.omega0 = resolve(parse_frequency("Omega0", get("Omega0")), g);
    g.g0 = resolve(parse_frequency("G0", get("G0")), g);
    if (has("omega_e")) g.atomic_frequency = resolve(parse_frequency("omega_e", get("omega_e")), g);
    if (has("omega_c")) g.cavity_frequency = resolve(parse_frequency("omega_c", get("omega_c")), g);
    if (g.atomic_frequency) check(*g.atomic_frequency > 0.0, "omega_e", "must be positive");
    if (g.cavity_frequency) check(*g.cavity_frequency > 0.0, "omega_c", "must be positive");

    if (has("n_steps")) c.n_steps = parse_count("n_steps", get("n_steps"));
    check(c.n_steps >= kMinGridSteps, "n_steps", "must be >= 100");
    if (has("output_dir")) c.output_dir = get("output_dir");
    if (has("stepper")) {
        try {
            c.propagation.stepper = parse_stepper(get("stepper"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("stepper", e.what());
        }
    }
    if (has("step_criterion")) c.propagation.step_criterion = parse_number("step_criterion", get("step_criterion"));
    check(c.propagation.step_criterion > 0.0, "step_criterion", "must be positive");
    if (has("null_tol")) c.null_tol = parse_number("null_tol", get("null_tol"));
    check(c.null_tol > 0.0, "null_tol", "must be positive");
    if (has("sweep_z0")) c.sweep_z0 = parse_axis("sweep_z0", get("sweep_z0"));
    if (has("sweep_d")) c.sweep_d = parse_axis("sweep_d", get("sweep_d"));
    if (has("sweep_steps")) c.sweep_steps = parse_count("sweep_steps", get("sweep_steps"));
    check(c.sweep_steps >= kMinGridSteps, "sweep_steps", "must be >= 100");

    if (has("robust_parameter") != has("robust_factors")) {
        throw ConfigError(has("robust_parameter") ? "robust_factors" : "robust_parameter",
                          "robust_parameter and robust_factors must be given together");
    }
    if (has("robust_parameter")) {
        RobustnessSpec spec;
        try {
            spec.parameter = parse_robust_parameter(get("robust_parameter"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("robust_parameter", e.what());
        }
        std::istringstream factors(get("robust_factors"));
        std::string item;
        while (std::getline(factors, item, ',')) {
            const double f = parse_number("robust_factors", item);
            check(f > 0.0, "robust_factors", "factors must be positive");
            spec.factors.push_back(f);
        }
        c.robustness = std::move(spec);
    }

    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        throw ConfigError(msg.substr(0, msg.find(':')), msg);
    }
    return c;
}

std::string render_config(const RunConfig& c) {
    const Geometry& g = c.geometry;
    std::ostringstream out;
    if (c.command) out << "command = " << to_string(*c.command) << '\n';
    out << "scheme = " << to_string(g.scheme) << '\n'
        << "atoms = " << g.atoms << '\n'
        << "v = " << fmt(g.v) << " m/s\n"
        << "W_L = " << fmt(g.waist_laser) << " m\n"
        << "W_C = " << fmt(g.waist_cavity) << " m\n"
        << "lambda = " << fmt(g.wavelength) << " m\n"
        << "Omega0 = " << fmt(g.omega0) << " rad/s\n"
        << "G0 = " << fmt(g.g0) << " rad/s\n"
        << "z0 = " << fmt(g.z0) << " m\n"
        << "d = " << fmt(g.d) << " m\n"
        << "t_span = " << fmt(g.t_span) << '\n';
    if (g.atomic_frequency) out << "omega_e = " << fmt(*g.atomic_frequency) << " rad/s\n";
    if (g.cavity_frequency) out << "omega_c = " << fmt(*g.cavity_frequency) << " rad/s\n";
    out << "n_steps = " << c.n_steps << '\n'
        << "output_dir = " << c.output_dir << '\n'
        << "stepper = " << to_string(c.propagation.stepper) << '\n'
        << "step_criterion = " << fmt(c.propagation.step_criterion) << '\n'
        << "null_tol = " << fmt(c.null_tol) << '\n';
    auto axis = [&](const char* key, const AxisRange& r) {
        out << key << " = " << fmt(r.min) << ':' << fmt(r.max) << ':' << r.count << " m\n";
    };
    if (c.sweep_z0) axis("sweep_z0", *c.sweep_z0);
    if (c.sweep_d) axis("sweep_d", *c.sweep_d);
    out << "sweep_steps = " << c.sweep_steps << '\n';
    if (c.robustness) {
        out << "robust_parameter = " << to_string(c.robustness->parameter) << '\n' << "robust_factors = ";
        for (std::size_t k = 0; k < c.robustness->factors.size(); ++k) {
            out << (k ? ", " : "") << fmt(c.robustness->factors[k]);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace wstate
