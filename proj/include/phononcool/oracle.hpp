// oracle.hpp - brute-force kick on the full resonator x qubit space (test reference)

#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "phononcool/model.hpp"

namespace phononcool::oracle {

// Basis index of |n, q> with q = 0 for |g>, 1 for |e>.
inline Eigen::Index basis_index(std::size_t n, int q) { return static_cast<Eigen::Index>(2 * n) + q; }

// Density matrix on (0..n_max) x {g, e}.
struct BipartiteState {
    Eigen::MatrixXcd rho;

    std::size_t n_max() const { return static_cast<std::size_t>(rho.rows() / 2) - 1; }

    // Hermitian and unit trace within 1e-12, eigenvalues above -1e-10.
    bool is_valid() const;

    static BipartiteState product(const PhononDistribution& dist, double p_e);
    Eigen::MatrixXcd trace_qubit() const;
};

// exp(-i h tau) for h = g (a sigma_+ + a^dag sigma_-), written block by block.
// |e, n_max> has no partner inside the truncation and is left unchanged.
Eigen::MatrixXcd jc_unitary(double g, double tau, std::size_t n_max);

// Resonant interaction Hamiltonian built from truncated ladder operators.
Eigen::MatrixXcd jc_hamiltonian(double g, std::size_t n_max);

// Tr_qubit[U (rho (x) ((1-p_e)|g><g| + p_e|e><e|)) U^dag], diagonal part.
// Throws InvariantViolation if any phonon coherence exceeds 1e-12.
PhononDistribution kick_oracle(const PhononDistribution& dist, double g, double tau, double p_e);

} // namespace phononcool::oracle
