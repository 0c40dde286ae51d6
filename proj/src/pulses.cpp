#include "wstate/pulses.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wstate {

namespace {

void require(bool ok, const char* field, const std::string& what) {
    if (!ok) throw std::invalid_argument(std::string(field) + ": " + what);
}

double gaussian(double x, double waist) {
    const double r = x / waist;
    return std::exp(-r * r);
}

}  // namespace

std::string to_string(Scheme s) { return s == Scheme::Scheme1 ? "scheme1" : "scheme2"; }

Scheme parse_scheme(const std::string& text) {
    std::string t;
    for (char ch : text) t += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (t == "scheme1" || t == "1") return Scheme::Scheme1;
    if (t == "scheme2" || t == "2") return Scheme::Scheme2;
    throw std::invalid_argument("scheme: expected scheme1 or scheme2, got '" + text + "'");
}

void Geometry::validate() const {
    require(atoms >= 2, "atoms", "must be >= 2");
    require(std::isfinite(v) && v > 0.0, "v", "must be a finite positive speed");
    require(std::isfinite(waist_laser) && waist_laser > 0.0, "W_L", "must be positive");
    require(std::isfinite(waist_cavity) && waist_cavity > 0.0, "W_C", "must be positive");
    require(std::isfinite(wavelength) && wavelength > 0.0, "lambda", "must be positive");
    require(std::isfinite(omega0), "Omega0", "must be finite");
    require(std::isfinite(g0), "G0", "must be finite");
    require(std::isfinite(z0) && z0 >= 0.0, "z0", "must be >= 0");
    require(std::isfinite(d) && d >= 0.0, "d", "must be >= 0");
    require(std::isfinite(t_span) && t_span > 0.0, "t_span", "must be positive");
    if (atomic_frequency) require(*atomic_frequency > 0.0, "omega_e", "must be positive");
    if (cavity_frequency) require(*cavity_frequency > 0.0, "omega_c", "must be positive");
}

CouplingSet couplings_at(const Geometry& geo, double t) {
    const int n = geo.atoms;
    const double x = geo.v * t;
    const double standing_wave = std::cos(2.0 * std::numbers::pi * geo.z0 / geo.wavelength);
    const double off_axis = gaussian(geo.z0, geo.waist_laser);
    const double cavity = geo.g0 * gaussian(x, geo.waist_cavity);

    CouplingSet c;
    c.omega.resize(n);
    c.g.resize(n);
    if (geo.scheme == Scheme::Scheme1) {
        c.g[0] = cavity * standing_wave;
        c.omega[0] = geo.omega0 * off_axis * gaussian(x - geo.d, geo.waist_laser);
        const double omega_rest = geo.omega0 * gaussian(x + geo.d, geo.waist_laser);
        for (int i = 1; i < n; ++i) {
            c.g[i] = cavity;
            c.omega[i] = omega_rest;
        }
    } else {
        const double omega = geo.omega0 * off_axis * gaussian(x + geo.d, geo.waist_laser);
        std::fill(c.g.begin(), c.g.end(), cavity * standing_wave);
        std::fill(c.omega.begin(), c.omega.end(), omega);
    }
    return c;
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> out(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k) out[k] = at(k);
    return out;
}

TimeGrid make_time_grid(const Geometry& geo, std::size_t n_steps) {
    geo.validate();
    if (n_steps < kMinGridSteps) {
        throw std::invalid_argument("n_steps must be >= " + std::to_string(kMinGridSteps) + ", got " +
                                    std::to_string(n_steps));
    }
    const double tf = geo.t_span * (std::max(geo.waist_cavity, geo.waist_laser) + geo.d) / geo.v;
    return TimeGrid{-tf, tf, n_steps};
}

AdiabaticityReport adiabaticity_report(const Geometry& geo) {
    geo.validate();
    AdiabaticityReport r;
    r.omega_area = std::abs(geo.omega0) * geo.waist_laser / geo.v;
    r.g_area = std::abs(geo.g0) * geo.waist_cavity / geo.v;
    r.warning = r.omega_area < kAreaWarning || r.g_area < kAreaWarning;
    if (geo.atomic_frequency && geo.cavity_frequency) {
        const double slow = std::max(std::abs(geo.omega0), std::abs(geo.g0));
        r.rwa_ratio = slow / std::min(*geo.atomic_frequency, *geo.cavity_frequency);
        r.rwa_ok = r.rwa_ratio <= kRwaRatioLimit;
    }
    return r;
}

}  // namespace wstate
