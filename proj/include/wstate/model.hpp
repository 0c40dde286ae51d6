#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace wstate {

using RealMatrix = Eigen::MatrixXd;
using StateVector = Eigen::VectorXcd;

enum class AtomLevel { g1 = 0, e = 1, g2 = 2 };

/// One ket |A1,...,AN,n> of the single-excitation subspace.
struct BasisLabel {
    std::vector<AtomLevel> atoms;
    int photons = 0;

    /// Compact column name, e.g. "g1g2g2_0".
    std::string name() const;
    /// Ket notation, e.g. "|g1,g2,g2,0>".
    std::string ket() const;

    bool operator==(const BasisLabel&) const = default;
};

/// Canonical ordering of the 2N+1 subspace states: the N single-g1 grounds,
/// then the N single-excited states, then the one-photon state.
std::vector<BasisLabel> canonical_basis(int n_atoms);

inline int subspace_dim(int n_atoms) { return 2 * n_atoms + 1; }
inline int ground_index(int atom) { return atom; }
inline int excited_index(int n_atoms, int atom) { return n_atoms + atom; }
inline int photon_index(int n_atoms) { return 2 * n_atoms; }

/// Instantaneous laser (omega) and cavity (g) Rabi frequencies, rad/s.
/// Signs are kept as given.
struct CouplingSet {
    std::vector<double> omega;
    std::vector<double> g;

    int atoms() const { return static_cast<int>(omega.size()); }
    /// Throws std::invalid_argument on size mismatch or non-finite values.
    void validate() const;
    /// Largest |coupling| over all 2N entries.
    double max_abs() const;
};

/// Linear combination a*x + b*y (both Hamiltonians are linear in the couplings).
CouplingSet combine(double a, const CouplingSet& x, double b, const CouplingSet& y);

/// Effective (2N+1)-dimensional Hamiltonian in the canonical basis, resonant
/// frame. H(i, N+i) = omega_i, H(N+i, 2N) = g_i, symmetric, zero elsewhere.
RealMatrix build_effective_hamiltonian(const CouplingSet& c);

/// Max absolute row sum of the effective Hamiltonian; an upper bound on the
/// spectral norm that needs no matrix.
double effective_row_sum_norm(const CouplingSet& c);

/// Dimension of the truncated full space {g1,e,g2}^N x {0,1}.
std::size_t full_dim(int n_atoms);

/// Tensor index of a product ket; atom 1 is the most significant digit and
/// the photon number is the least significant.
std::size_t full_index(const BasisLabel& label);

/// Full-space Hamiltonian (photon number truncated at 1), resonant frame.
RealMatrix build_full_hamiltonian(const CouplingSet& c);

/// Isometry mapping the canonical subspace into the full tensor space.
RealMatrix embedding_matrix(int n_atoms);

StateVector embed_state(const StateVector& s, int n_atoms);
/// Restriction of a full-space vector to the subspace amplitudes.
StateVector project_state(const StateVector& full, int n_atoms);

}  // namespace wstate
