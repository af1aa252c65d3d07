#include "phononcool/oracle.hpp"

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>

namespace phononcool::oracle {

namespace {
constexpr double closure_tol = 1e-12;
} // namespace

bool BipartiteState::is_valid() const
{
    if (rho.rows() != rho.cols() || rho.rows() % 2 != 0) {
        return false;
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        return false;
    }
    if (std::abs(rho.trace() - std::complex<double>(1.0, 0.0)) > 1e-12) {
        return false;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -1e-10;
}

BipartiteState BipartiteState::product(const PhononDistribution& dist, double p_e)
{
    const auto dim = static_cast<Eigen::Index>(2 * dist.size());
    BipartiteState s{Eigen::MatrixXcd::Zero(dim, dim)};
    for (std::size_t n = 0; n < dist.size(); ++n) {
        s.rho(basis_index(n, 0), basis_index(n, 0)) = (1.0 - p_e) * dist[n];
        s.rho(basis_index(n, 1), basis_index(n, 1)) = p_e * dist[n];
    }
    return s;
}

Eigen::MatrixXcd BipartiteState::trace_qubit() const
{
    const auto levels = rho.rows() / 2;
    Eigen::MatrixXcd r(levels, levels);
    for (Eigen::Index n = 0; n < levels; ++n) {
        for (Eigen::Index m = 0; m < levels; ++m) {
            r(n, m) = rho(2 * n, 2 * m) + rho(2 * n + 1, 2 * m + 1);
        }
    }
    return r;
}

Eigen::MatrixXcd jc_unitary(double g, double tau, std::size_t n_max)
{
    const auto dim = static_cast<Eigen::Index>(2 * (n_max + 1));
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    const std::complex<double> minus_i(0.0, -1.0);
    for (std::size_t n = 0; n < n_max; ++n) {
        const double theta = g * tau * std::sqrt(static_cast<double>(n + 1));
        const auto lower = basis_index(n + 1, 0);  // |g, n+1>
        const auto upper = basis_index(n, 1);      // |e, n>
        u(lower, lower) = std::cos(theta);
        u(upper, upper) = std::cos(theta);
        u(lower, upper) = minus_i * std::sin(theta);
        u(upper, lower) = minus_i * std::sin(theta);
    }
    return u;
}

Eigen::MatrixXcd jc_hamiltonian(double g, std::size_t n_max)
{
    const auto levels = static_cast<Eigen::Index>(n_max + 1);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(levels, levels);
    for (Eigen::Index n = 1; n < levels; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    Eigen::Matrix2d sigma_plus = Eigen::Matrix2d::Zero();
    sigma_plus(1, 0) = 1.0;  // |e><g|

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * levels, 2 * levels);
    for (Eigen::Index n = 0; n < levels; ++n) {
        for (Eigen::Index m = 0; m < levels; ++m) {
            for (int q = 0; q < 2; ++q) {
                for (int r = 0; r < 2; ++r) {
                    // a (x) sigma_+ + a^dag (x) sigma_-
                    h(2 * n + q, 2 * m + r) = a(n, m) * sigma_plus(q, r) + a(m, n) * sigma_plus(r, q);
                }
            }
        }
    }
    return (g * h).cast<std::complex<double>>();
}

PhononDistribution kick_oracle(const PhononDistribution& dist, double g, double tau, double p_e)
{
    if (!(p_e >= 0.0 && p_e <= 1.0)) {
        throw DomainError("p_e must lie in [0, 1]");
    }
    const auto u = jc_unitary(g, tau, dist.n_max());
    BipartiteState state = BipartiteState::product(dist, p_e);
    state.rho = u * state.rho * u.adjoint();
    const Eigen::MatrixXcd reduced = state.trace_qubit();

    std::vector<double> p(dist.size());
    for (Eigen::Index n = 0; n < reduced.rows(); ++n) {
        for (Eigen::Index m = 0; m < reduced.cols(); ++m) {
            if (n != m && std::abs(reduced(n, m)) > closure_tol) {
                throw InvariantViolation("kick produced a phonon coherence at (" + std::to_string(n) + ", " +
                                         std::to_string(m) + ")");
            }
        }
        p[static_cast<std::size_t>(n)] = reduced(n, n).real();
    }
    return PhononDistribution(std::move(p));
}

} // namespace phononcool::oracle
