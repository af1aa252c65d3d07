// model.hpp - phonon populations and the Jaynes-Cummings kick acting on them

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "phononcool/errors.hpp"

namespace phononcool {

inline constexpr double default_tail_tol = 1e-12;

// Populations p_0..p_{n_max} of the resonator Fock states. Always normalized;
// entries are non-negative. Coherences are not represented: both the kick and
// thermal damping map diagonal states to diagonal states.
class PhononDistribution {
public:
    // Clamps entries in (-1e-12, 0) to zero and rescales to unit sum when the
    // sum differs from one by more than 1e-12. Throws InvariantViolation on
    // more negative entries and DomainError on NaN, zero mass or fewer than
    // two levels.
    explicit PhononDistribution(std::vector<double> populations);

    static PhononDistribution vacuum(std::size_t n_max);
    static PhononDistribution fock(std::size_t n, std::size_t n_max);

    std::size_t n_max() const { return p_.size() - 1; }
    std::size_t size() const { return p_.size(); }
    double operator[](std::size_t n) const { return p_[n]; }
    std::span<const double> populations() const { return p_; }
    const std::vector<double>& values() const { return p_; }

    double tail_mass() const { return p_.back(); }
    bool tail_ok(double tail_tol = default_tail_tol) const { return p_.back() < tail_tol; }

    // Zero-pads when growing. Shrinking throws TruncationOverflow if the
    // discarded mass exceeds tail_tol.
    PhononDistribution resized(std::size_t n_max, double tail_tol = default_tail_tol) const;

private:
    std::vector<double> p_;
};

// Per-level coefficients of the kick map for pulse area theta = g tau:
//   ce2[n] = sin^2(theta sqrt(n+1)),  cg2[n] = cos^2(theta sqrt(n)).
// p_e is the probability that the qubit enters the kick excited.
struct KickMap {
    std::vector<double> ce2;
    std::vector<double> cg2;
    double p_e = 0.0;
    double theta = 0.0;

    std::size_t n_max() const { return ce2.size() - 1; }
    KickMap resized(std::size_t n_max) const;
};

struct ProtocolParams {
    double g = 0.0;      // coupling, rad/s
    double tau = 0.0;    // kick duration, s
    double r_a = 0.0;    // kick rate, 1/s
    double kappa = 0.0;  // resonator energy decay rate, 1/s
    double n_th = 0.0;   // thermal phonon number of the bath
    double p_e = 0.0;    // qubit excited-state preparation probability

    double pulse_area() const { return g * tau; }
    double ra_over_kappa() const { return r_a / kappa; }

    // Builds parameters from dimensionless ratios with an absolute kappa scale.
    static ProtocolParams from_ratios(double g, double pulse_area, double kappa, double ra_over_kappa,
                                      double n_th, double p_e = 0.0);

    // g, tau > 0; r_a, kappa >= 0 and not both zero; n_th >= 0; p_e in [0, 1].
    void validate() const;

    // Flags r_a tau > 0.5 and kappa tau > 0.01 (coarse-graining assumptions).
    void check_coarse_graining(Diagnostics* diag) const;
};

// max(60, ceil(20 + 12 n_th))
std::size_t default_n_max(double n_th);

// Next truncation when the tail is too heavy: +50%.
std::size_t grown_n_max(std::size_t n_max);

KickMap build_kick_map(double g, double tau, double p_e, std::size_t n_max);

// Same as build_kick_map with theta = g tau given directly; theta = 0 is allowed.
KickMap build_kick_map_for_area(double theta, double p_e, std::size_t n_max);

// One kick with a freshly prepared qubit, traced out:
//   p'_n = (1-p_e)[cg2[n] p_n + ce2[n] p_{n+1}] + p_e[cg2[n+1] p_n + ce2[n-1] p_{n-1}]
// At the truncation edge |e, n_max> has no partner and is left unchanged.
PhononDistribution apply_kick(const PhononDistribution& dist, const KickMap& kick,
                              Diagnostics* diag = nullptr);

double mean_phonon(const PhononDistribution& dist);

// Geometric distribution p_n ~ (n_th/(n_th+1))^n on 0..n_max.
PhononDistribution thermal_distribution(double n_th, std::size_t n_max, Diagnostics* diag = nullptr);

// Thermal distribution starting from default_n_max, grown until the tail is
// below tail_tol.
PhononDistribution thermal_distribution_auto(double n_th, double tail_tol = default_tail_tol);

} // namespace phononcool
