#include "wstate/dynamics.hpp"
#include "wstate/spectral.hpp"

#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace wstate;
using wstate::testing::random_couplings;
using wstate::testing::scheme1_reference;
using wstate::testing::scheme2_reference;

namespace {

double null_residual(const CouplingSet& c, const StateVector& d) {
    const RealMatrix h = build_effective_hamiltonian(c);
    const double norm = Eigen::SelfAdjointEigenSolver<RealMatrix>(h).eigenvalues().cwiseAbs().maxCoeff();
    return (h.cast<std::complex<double>>() * d).norm() / norm;
}

CouplingSet symmetric_scheme1(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    const double g = u(rng), om = u(rng);
    return {{u(rng), om, om}, {g, g, g}};
}

CouplingSet symmetric_scheme2(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    const double g = u(rng), om = u(rng);
    return {{om, om, om}, {g, g, g}};
}

}  // namespace

TEST(Snapshot, ZeroCouplingsAllDark) {
    const SpectralSnapshot s = snapshot(RealMatrix::Zero(7, 7));
    EXPECT_TRUE(s.eigenvalues.isZero(0.0));
    EXPECT_EQ(s.dark_dimension(), 7);
    EXPECT_FALSE(s.gap_defined);
    EXPECT_EQ(s.gap, 0.0);
}

TEST(Snapshot, UnitCouplingsDarkDimension) {
    // Independent dense solve of the 7x7 gives spectrum {-2, -1, -1, 0, 1, 1, 2}:
    // one zero eigenvalue.
    const RealMatrix h = build_effective_hamiltonian({{1, 1, 1}, {1, 1, 1}});
    const SpectralSnapshot s = snapshot(h);
    Eigen::VectorXd expected(7);
    expected << -2, -1, -1, 0, 1, 1, 2;
    EXPECT_LE((s.eigenvalues - expected).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(s.dark_dimension(), 1);
    EXPECT_TRUE(s.gap_defined);
    EXPECT_NEAR(s.gap, 1.0, 1e-12);
}

TEST(Snapshot, SpectrumSymmetricAndResidualSmall) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 1000; ++trial) {
        const RealMatrix h = build_effective_hamiltonian(random_couplings(rng, 3));
        const SpectralSnapshot s = snapshot(h);
        const Eigen::VectorXd reversed = s.eigenvalues.reverse();
        EXPECT_LE((s.eigenvalues + reversed).cwiseAbs().maxCoeff(), 1e-10 * s.norm);
        for (Eigen::Index k = 0; k < 7; ++k) {
            const double residual =
                (h * s.eigenvectors.col(k) - s.eigenvalues(k) * s.eigenvectors.col(k)).norm();
            EXPECT_LE(residual, 1e-10 * s.norm);
        }
        EXPECT_GE(s.dark_dimension(), 1);
        const RealMatrix gram = s.dark_subspace.transpose() * s.dark_subspace;
        EXPECT_TRUE(gram.isIdentity(1e-12));
    }
}

TEST(AnalyticDark, Scheme2NullProperty) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 1000; ++trial) {
        const CouplingSet c = symmetric_scheme2(rng);
        const StateVector d = analytic_dark_state(c, Scheme::Scheme2);
        EXPECT_NEAR(d.norm(), 1.0, 1e-14);
        EXPECT_LE(null_residual(c, d), 1e-12);
    }
}

TEST(AnalyticDark, Scheme1NullProperty) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        const CouplingSet c = symmetric_scheme1(rng);
        const StateVector d = analytic_dark_state(c, Scheme::Scheme1);
        EXPECT_LE(null_residual(c, d), 1e-12);
    }
}

TEST(AnalyticDark, LiesInNumericNullSpace) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 500; ++trial) {
        const bool first = trial % 2 == 0;
        const CouplingSet c = first ? symmetric_scheme1(rng) : symmetric_scheme2(rng);
        const StateVector d = analytic_dark_state(c, first ? Scheme::Scheme1 : Scheme::Scheme2);
        const RealMatrix basis = snapshot(build_effective_hamiltonian(c)).dark_subspace;
        const StateVector projected = basis.cast<std::complex<double>>() * (basis.transpose().cast<std::complex<double>>() * d);
        EXPECT_LE((d - projected).norm(), 1e-10);
    }
}

TEST(AnalyticDark, Scheme2Limits) {
    const StateVector w = analytic_dark_state({{0, 0, 0}, {2, 2, 2}}, Scheme::Scheme2);
    EXPECT_LE((w - w_state(3)).norm(), 1e-15);
    const StateVector photon = analytic_dark_state({{1e9, 1e9, 1e9}, {1, 1, 1}}, Scheme::Scheme2);
    EXPECT_GT(std::norm(photon(6)), 1.0 - 1e-15);
}

TEST(AnalyticDark, Scheme1EqualLasersStrongCavity) {
    const StateVector d = analytic_dark_state({{1, 1, 1}, {1e6, 1e6, 1e6}}, Scheme::Scheme1);
    EXPECT_LE((d - w_state(3)).norm(), 1e-6);
}

TEST(AnalyticDark, Errors) {
    EXPECT_THROW(analytic_dark_state({{1, 2, 3}, {1, 1, 1}}, Scheme::Scheme1), std::invalid_argument);
    EXPECT_THROW(analytic_dark_state({{1, 2, 2}, {0.5, 1, 1}}, Scheme::Scheme1), std::invalid_argument);
    EXPECT_THROW(analytic_dark_state({{1, 1, 2}, {1, 1, 1}}, Scheme::Scheme2), std::invalid_argument);
    try {
        analytic_dark_state({{1, 1, 1}, {0, 0, 0}}, Scheme::Scheme2);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find('G'), std::string::npos);
    }
    try {
        analytic_dark_state({{1, 0, 0}, {1, 1, 1}}, Scheme::Scheme1);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("Omega_2"), std::string::npos);
    }
}

TEST(AnalyticDark, ReferenceAtOriginInNullSpace) {
    const Geometry g = scheme2_reference();
    const CouplingSet c = couplings_at(g, 0.0);
    const StateVector d = analytic_dark_state(c, Scheme::Scheme2);
    const RealMatrix basis = snapshot(build_effective_hamiltonian(c)).dark_subspace;
    EXPECT_NEAR((basis.transpose().cast<std::complex<double>>() * d).squaredNorm(), 1.0, 1e-12);
}

TEST(DarkOverlap, DarkAndBrightTrajectories) {
    const Geometry g = scheme2_reference();
    const auto times = make_time_grid(g, 100).times();
    Trajectory dark, bright;
    dark.times = bright.times = times;
    for (double t : times) {
        const SpectralSnapshot s = snapshot(build_effective_hamiltonian(couplings_at(g, t)));
        dark.states.push_back(s.dark_subspace.col(0).cast<std::complex<double>>());
        bright.states.push_back(s.eigenvectors.col(6).cast<std::complex<double>>());
    }
    for (double v : dark_overlap_series(dark, g)) EXPECT_NEAR(v, 1.0, 1e-12);
    const auto mask = active_mask(times, g);
    const auto series = dark_overlap_series(bright, g);
    for (std::size_t j = 0; j < times.size(); ++j)
        if (mask[j]) EXPECT_LE(series[j], 1e-12);
}

TEST(DarkOverlap, MinOverActiveIgnoresInactive) {
    EXPECT_EQ(min_over_active({0.1, 0.9, 0.8}, {false, true, true}), 0.8);
    EXPECT_EQ(min_over_active({0.1, 0.2}, {false, false}), 1.0);
}

TEST(DarkOverlap, ActiveMaskThreshold) {
    const Geometry g = scheme2_reference();
    const auto times = make_time_grid(g, 400).times();
    const auto mask = active_mask(times, g);
    EXPECT_FALSE(mask.front());
    EXPECT_FALSE(mask.back());
    EXPECT_TRUE(mask[200]);
}

TEST(FStirap, SeparatedPulsesGiveVanishingInitialRatio) {
    const FStirapCheck c = fstirap_condition_check(scheme1_reference(0.0, 200e-6));
    EXPECT_LT(c.ratio_initial, 1e-6);
}

TEST(FStirap, ReferenceParametersCavityDominates) {
    const FStirapCheck c = fstirap_condition_check(scheme1_reference(1.9e-6, 24e-6));
    EXPECT_GT(c.g_dominance, 0.0);
    EXPECT_GT(c.ratio_final, c.ratio_initial);
}

TEST(FStirap, RejectsScheme2) {
    EXPECT_THROW(fstirap_condition_check(scheme2_reference()), std::invalid_argument);
}

TEST(GapScan, PositiveAtReferenceParameters) {
    for (const Geometry& g : {scheme2_reference(), scheme1_reference(1.9e-6, 24e-6)}) {
        const GapScan s = scan_gap(g);
        EXPECT_GT(s.min_gap, 0.0);
        EXPECT_GE(s.max_dark_dimension, 1);
    }
}
