#include "wstate/model.hpp"

#include <cmath>
#include <stdexcept>

namespace wstate {

namespace {

const char* level_name(AtomLevel l) {
    switch (l) {
        case AtomLevel::g1: return "g1";
        case AtomLevel::e: return "e";
        case AtomLevel::g2: return "g2";
    }
    return "?";
}

void require_atoms(int n_atoms) {
    if (n_atoms < 2) {
        throw std::invalid_argument("number of atoms must be >= 2, got " + std::to_string(n_atoms));
    }
}

}  // namespace

std::string BasisLabel::name() const {
    std::string out;
    for (AtomLevel l : atoms) out += level_name(l);
    out += '_';
    out += std::to_string(photons);
    return out;
}

std::string BasisLabel::ket() const {
    std::string out = "|";
    for (AtomLevel l : atoms) {
        out += level_name(l);
        out += ',';
    }
    out += std::to_string(photons);
    out += '>';
    return out;
}

std::vector<BasisLabel> canonical_basis(int n_atoms) {
    require_atoms(n_atoms);
    std::vector<BasisLabel> basis;
    basis.reserve(subspace_dim(n_atoms));
    const std::vector<AtomLevel> all_g2(n_atoms, AtomLevel::g2);
    for (AtomLevel level : {AtomLevel::g1, AtomLevel::e}) {
        for (int i = 0; i < n_atoms; ++i) {
            BasisLabel label{all_g2, 0};
            label.atoms[i] = level;
            basis.push_back(std::move(label));
        }
    }
    basis.push_back(BasisLabel{all_g2, 1});
    return basis;
}

void CouplingSet::validate() const {
    if (omega.size() != g.size()) {
        throw std::invalid_argument("coupling set has " + std::to_string(omega.size()) +
                                    " laser but " + std::to_string(g.size()) + " cavity values");
    }
    require_atoms(atoms());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (!std::isfinite(omega[i])) {
            throw std::invalid_argument("non-finite laser coupling Omega_" + std::to_string(i + 1));
        }
        if (!std::isfinite(g[i])) {
            throw std::invalid_argument("non-finite cavity coupling G_" + std::to_string(i + 1));
        }
    }
}

double CouplingSet::max_abs() const {
    double m = 0.0;
    for (double x : omega) m = std::max(m, std::abs(x));
    for (double x : g) m = std::max(m, std::abs(x));
    return m;
}

CouplingSet combine(double a, const CouplingSet& x, double b, const CouplingSet& y) {
    CouplingSet out{x.omega, x.g};
    for (std::size_t i = 0; i < out.omega.size(); ++i) {
        out.omega[i] = a * x.omega[i] + b * y.omega[i];
        out.g[i] = a * x.g[i] + b * y.g[i];
    }
    return out;
}

RealMatrix build_effective_hamiltonian(const CouplingSet& c) {
    c.validate();
    const int n = c.atoms();
    const int dim = subspace_dim(n);
    RealMatrix h = RealMatrix::Zero(dim, dim);
    for (int i = 0; i < n; ++i) {
        const int e = excited_index(n, i);
        h(ground_index(i), e) = h(e, ground_index(i)) = c.omega[i];
        h(e, photon_index(n)) = h(photon_index(n), e) = c.g[i];
    }
    return h;
}

double effective_row_sum_norm(const CouplingSet& c) {
    double photon_row = 0.0;
    double best = 0.0;
    for (std::size_t i = 0; i < c.omega.size(); ++i) {
        best = std::max(best, std::abs(c.omega[i]) + std::abs(c.g[i]));
        photon_row += std::abs(c.g[i]);
    }
    return std::max(best, photon_row);
}

std::size_t full_dim(int n_atoms) {
    std::size_t d = 2;
    for (int i = 0; i < n_atoms; ++i) d *= 3;
    return d;
}

std::size_t full_index(const BasisLabel& label) {
    std::size_t idx = 0;
    for (AtomLevel l : label.atoms) idx = idx * 3 + static_cast<std::size_t>(l);
    return idx * 2 + static_cast<std::size_t>(label.photons);
}

RealMatrix build_full_hamiltonian(const CouplingSet& c) {
    c.validate();
    const int n = c.atoms();
    const std::size_t dim = full_dim(n);
    RealMatrix h = RealMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));

    std::size_t atom_stride = 2;  // stride of atom n-1 (least significant atom digit)
    std::vector<std::size_t> stride(n);
    for (int i = n - 1; i >= 0; --i) {
        stride[i] = atom_stride;
        atom_stride *= 3;
    }

    for (std::size_t idx = 0; idx < dim; ++idx) {
        const int photons = static_cast<int>(idx % 2);
        for (int i = 0; i < n; ++i) {
            const auto level = static_cast<AtomLevel>((idx / stride[i]) % 3);
            const auto row = static_cast<Eigen::Index>(idx);
            if (level == AtomLevel::g1) {
                // |g1>_i <-> |e>_i, photon number unchanged
                const auto col = static_cast<Eigen::Index>(idx + stride[i]);
                h(row, col) = h(col, row) = c.omega[i];
            } else if (level == AtomLevel::e && photons == 0) {
                // |e>_i|0> <-> |g2>_i|1>, amplitude g_i * sqrt(0 + 1)
                const auto col = static_cast<Eigen::Index>(idx + stride[i] + 1);
                h(row, col) = h(col, row) = c.g[i];
            }
        }
    }
    return h;
}

RealMatrix embedding_matrix(int n_atoms) {
    const auto basis = canonical_basis(n_atoms);
    RealMatrix p = RealMatrix::Zero(static_cast<Eigen::Index>(full_dim(n_atoms)),
                                    static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        p(static_cast<Eigen::Index>(full_index(basis[k])), static_cast<Eigen::Index>(k)) = 1.0;
    }
    return p;
}

StateVector embed_state(const StateVector& s, int n_atoms) {
    const auto basis = canonical_basis(n_atoms);
    if (s.size() != static_cast<Eigen::Index>(basis.size())) {
        throw std::invalid_argument("state has dimension " + std::to_string(s.size()) +
                                    ", expected " + std::to_string(basis.size()));
    }
    StateVector full = StateVector::Zero(static_cast<Eigen::Index>(full_dim(n_atoms)));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        full(static_cast<Eigen::Index>(full_index(basis[k]))) = s(static_cast<Eigen::Index>(k));
    }
    return full;
}

StateVector project_state(const StateVector& full, int n_atoms) {
    const auto basis = canonical_basis(n_atoms);
    if (full.size() != static_cast<Eigen::Index>(full_dim(n_atoms))) {
        throw std::invalid_argument("full-space vector has dimension " + std::to_string(full.size()) +
                                    ", expected " + std::to_string(full_dim(n_atoms)));
    }
    StateVector s(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        s(static_cast<Eigen::Index>(k)) = full(static_cast<Eigen::Index>(full_index(basis[k])));
    }
    return s;
}

}  // namespace wstate
