#include "wstate/dynamics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace wstate {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

// Fixed-capacity storage keeps the per-step eigen-solve off the heap.
constexpr int kMaxInline = 8;
using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxInline, kMaxInline>;
using SmallVec = Eigen::Matrix<cd, Eigen::Dynamic, 1, 0, kMaxInline, 1>;

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// The effective Hamiltonian is bipartite: H = [[0, B], [B^T, 0]] between the
// "outer" set {grounds, photon} and the excited set, with B (N+1) x N. With
// M = B^T B = V diag(mu) V^T and s = sqrt(mu):
//   e' = V (cos(tau s) Y - i sin(tau s)/s X)
//   a' = a + B V (f X - i sin(tau s)/s Y),  f = (cos(tau s) - 1)/mu
// where X = V^T B^T a, Y = V^T e.
template <class Mat, class Vec>
void bipartite_exponential(const CouplingSet& c, double tau, StateVector& psi) {
    const int n = c.atoms();
    const int p = photon_index(n);

    Mat m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) = c.g[i] * c.g[j];
        m(i, i) += c.omega[i] * c.omega[i];
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    const Mat& v = es.eigenvectors();

    Vec bt_a(n), e(n);
    for (int i = 0; i < n; ++i) {
        bt_a(i) = c.omega[i] * psi(ground_index(i)) + c.g[i] * psi(p);
        e(i) = psi(excited_index(n, i));
    }
    const Vec x = v.transpose() * bt_a;
    const Vec y = v.transpose() * e;

    Vec e_rot(n), a_rot(n);
    for (int k = 0; k < n; ++k) {
        const double s = std::sqrt(std::max(es.eigenvalues()(k), 0.0));
        const double cs = std::cos(tau * s);
        const double sn = tau * sinc(tau * s);
        const double half = sinc(0.5 * tau * s);
        const double f = -0.5 * tau * tau * half * half;
        e_rot(k) = cs * y(k) - kI * sn * x(k);
        a_rot(k) = f * x(k) - kI * sn * y(k);
    }
    const Vec e_new = v * e_rot;
    const Vec w = v * a_rot;  // a' = a + B w

    cd photon_shift = 0.0;
    for (int i = 0; i < n; ++i) {
        psi(ground_index(i)) += c.omega[i] * w(i);
        photon_shift += c.g[i] * w(i);
        psi(excited_index(n, i)) = e_new(i);
    }
    psi(p) += photon_shift;
}

// Gauss-Legendre nodes and the commutator-free order-4 weights.
const double kGaussOffset = std::sqrt(3.0) / 6.0;
const double kCfSmall = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
const double kCfLarge = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;

struct Subdivision {
    std::size_t count;
    double norm;  // largest row-sum norm seen on the interval
};

Subdivision subdivide(const CouplingFn& couplings, double a, double b, double criterion) {
    constexpr int kSamples = 5;
    double norm = 0.0;
    for (int s = 0; s < kSamples; ++s) {
        // symmetric sample set so a->b and b->a give the same count
        const double t = a + (b - a) * static_cast<double>(s) / (kSamples - 1);
        norm = std::max(norm, effective_row_sum_norm(couplings(t)));
    }
    const double needed = std::ceil(norm * std::abs(b - a) / criterion);
    return {std::max<std::size_t>(1, static_cast<std::size_t>(needed)), norm};
}

// Advances psi from a to b with `apply(couplings, tau, psi)` providing the
// exact exponential exp(-i tau H(couplings)).
template <class Apply>
void advance(const CouplingFn& couplings, double a, double b, std::size_t m, Stepper stepper, StateVector& psi,
             Apply&& apply) {
    const double h = (b - a) / static_cast<double>(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double t0 = a + h * static_cast<double>(k);
        if (stepper == Stepper::Midpoint) {
            apply(couplings(t0 + 0.5 * h), h, psi);
        } else {
            const CouplingSet c1 = couplings(t0 + (0.5 - kGaussOffset) * h);
            const CouplingSet c2 = couplings(t0 + (0.5 + kGaussOffset) * h);
            apply(combine(kCfLarge, c1, kCfSmall, c2), h, psi);
            apply(combine(kCfSmall, c1, kCfLarge, c2), h, psi);
        }
    }
}

void check_normalized(const StateVector& psi0) {
    const double norm = psi0.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormTolerance) {
        throw std::invalid_argument("initial state is not normalized (norm " + std::to_string(norm) + ")");
    }
}

template <class Apply>
Trajectory run(const CouplingFn& couplings, const std::vector<double>& times, const StateVector& psi0,
               const PropagationOptions& opts, Apply&& apply) {
    check_normalized(psi0);
    if (times.size() < 2) throw std::invalid_argument("propagation needs at least two times");
    if (!(opts.step_criterion > 0.0)) throw std::invalid_argument("step_criterion must be positive");

    Trajectory traj;
    traj.times = times;
    traj.states.reserve(times.size());
    traj.populations.assign(static_cast<std::size_t>(psi0.size()), std::vector<double>(times.size()));

    StateVector psi = psi0;
    auto record = [&](std::size_t j) {
        for (Eigen::Index k = 0; k < psi.size(); ++k) {
            traj.populations[static_cast<std::size_t>(k)][j] = std::norm(psi(k));
        }
        traj.norm_drift = std::max(traj.norm_drift, std::abs(psi.norm() - 1.0));
        traj.states.push_back(psi);
    };
    record(0);
    const bool forward = times.back() > times.front();
    for (std::size_t j = 1; j < times.size(); ++j) {
        const double a = times[j - 1];
        const double b = times[j];
        if ((b > a) != forward || a == b) throw std::invalid_argument("propagation times must be strictly monotone");
        const Subdivision sub = subdivide(couplings, a, b, opts.step_criterion);
        traj.max_step_norm =
            std::max(traj.max_step_norm, sub.norm * std::abs(b - a) / static_cast<double>(sub.count));
        traj.substeps += sub.count;
        advance(couplings, a, b, sub.count, opts.stepper, psi, apply);
        record(j);
    }
    return traj;
}

}  // namespace

std::string to_string(Stepper s) { return s == Stepper::Midpoint ? "midpoint" : "cf4"; }

Stepper parse_stepper(const std::string& text) {
    if (text == "midpoint") return Stepper::Midpoint;
    if (text == "cf4") return Stepper::CommutatorFree4;
    throw std::invalid_argument("stepper: expected midpoint or cf4, got '" + text + "'");
}

void apply_effective_exponential(const CouplingSet& c, double tau, StateVector& psi) {
    const int n = c.atoms();
    if (psi.size() != subspace_dim(n)) {
        throw std::invalid_argument("state dimension does not match the coupling set");
    }
    if (n <= kMaxInline) {
        bipartite_exponential<SmallMat, SmallVec>(c, tau, psi);
    } else {
        bipartite_exponential<Eigen::MatrixXd, Eigen::VectorXcd>(c, tau, psi);
    }
}

void apply_dense_exponential(const RealMatrix& h, double tau, StateVector& psi) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
    const RealMatrix& v = es.eigenvectors();
    StateVector rotated = v.transpose() * psi;
    for (Eigen::Index k = 0; k < rotated.size(); ++k) {
        rotated(k) *= std::exp(-kI * (tau * es.eigenvalues()(k)));
    }
    psi = v * rotated;
}

StateVector initial_state(const Geometry& geo) {
    geo.validate();
    StateVector psi = StateVector::Zero(subspace_dim(geo.atoms));
    psi(geo.scheme == Scheme::Scheme1 ? ground_index(0) : photon_index(geo.atoms)) = 1.0;
    return psi;
}

Trajectory propagate(const Geometry& geo, const TimeGrid& grid, const StateVector& psi0,
                     const PropagationOptions& opts) {
    return propagate_times(geo, grid.times(), psi0, opts);
}

Trajectory propagate_times(const Geometry& geo, const std::vector<double>& times, const StateVector& psi0,
                           const PropagationOptions& opts) {
    geo.validate();
    return propagate_couplings([&geo](double t) { return couplings_at(geo, t); }, times, psi0, opts);
}

Trajectory propagate_couplings(const CouplingFn& couplings, const std::vector<double>& times,
                               const StateVector& psi0, const PropagationOptions& opts) {
    if (times.empty()) throw std::invalid_argument("propagation needs at least two times");
    const int n = couplings(times.front()).atoms();
    if (psi0.size() != subspace_dim(n)) {
        throw std::invalid_argument("initial state has dimension " + std::to_string(psi0.size()) + ", expected " +
                                    std::to_string(subspace_dim(n)));
    }
    return run(couplings, times, psi0, opts, [](const CouplingSet& c, double tau, StateVector& psi) {
        apply_effective_exponential(c, tau, psi);
    });
}

Trajectory propagate_full(const Geometry& geo, const TimeGrid& grid, const StateVector& psi0_full,
                          const PropagationOptions& opts) {
    if (psi0_full.size() != static_cast<Eigen::Index>(full_dim(geo.atoms))) {
        throw std::invalid_argument("full-space initial state has dimension " + std::to_string(psi0_full.size()) +
                                    ", expected " + std::to_string(full_dim(geo.atoms)));
    }
    geo.validate();
    const CouplingFn couplings = [&geo](double t) { return couplings_at(geo, t); };
    return run(couplings, grid.times(), psi0_full, opts, [](const CouplingSet& c, double tau, StateVector& psi) {
        apply_dense_exponential(build_full_hamiltonian(c), tau, psi);
    });
}

StateVector w_state(int n_atoms) {
    StateVector w = StateVector::Zero(subspace_dim(n_atoms));
    const double amp = 1.0 / std::sqrt(static_cast<double>(n_atoms));
    for (int i = 0; i < n_atoms; ++i) w(ground_index(i)) = amp;
    return w;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double sum = 0.0;
    for (std::size_t j = 1; j < x.size(); ++j) sum += 0.5 * (x[j] - x[j - 1]) * (y[j] + y[j - 1]);
    return sum;
}

}  // namespace wstate
