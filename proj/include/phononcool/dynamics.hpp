// dynamics.hpp - coarse-grained generator, time evolution and steady states

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "phononcool/model.hpp"

namespace phononcool {

// Linear generator P -> r_a (M - 1) P + L P on population vectors. Both the
// kick map and damping couple only neighbouring levels, so the matrix is
// tridiagonal. Off-diagonal entries are transition rates (1/s); each column
// sums to zero.
struct GeneratorMatrix {
    std::vector<double> diag;   // G(n, n)
    std::vector<double> upper;  // G(n, n+1): rate n+1 -> n, size n_max
    std::vector<double> lower;  // G(n+1, n): rate n -> n+1, size n_max
    ProtocolParams params;
    KickMap kick;

    std::size_t n_max() const { return diag.size() - 1; }
    std::size_t size() const { return diag.size(); }

    void apply(std::span<const double> p, std::span<double> out) const;
    std::vector<double> apply(std::span<const double> p) const;
    Eigen::MatrixXd to_dense() const;

    // Largest Gershgorin radius; bounds the spectral radius.
    double spectral_bound() const;
    // kappa when positive, otherwise r_a. Used to make residuals dimensionless.
    double rate_scale() const;
};

// Damping of a single mode in a thermal bath acting on populations:
//   dp_n/dt = kappa (n_th+1)[(n+1) p_{n+1} - n p_n] + kappa n_th [n p_{n-1} - (n+1) p_n]
// The upward rate out of the top level is dropped so probability is conserved.
GeneratorMatrix build_damping_generator(double kappa, double n_th, std::size_t n_max);

GeneratorMatrix build_generator(const ProtocolParams& params, const KickMap& kick, std::size_t n_max);

struct EvolutionTrace {
    std::vector<double> times;  // s
    std::vector<double> mean_n;
    std::vector<double> p0;
    std::vector<PhononDistribution> snapshots;  // filled when requested
};

enum class Integrator {
    automatic,    // explicit unless the run is stiff
    explicit_rk,  // Dormand-Prince 5(4)
    rational,     // L-stable (2,3) Pade approximant of exp(hG), tridiagonal solves
};

struct EvolveOptions {
    double rtol = 1e-10;
    double atol = 1e-13;
    Integrator integrator = Integrator::automatic;
    bool keep_snapshots = false;
    double tail_tol = default_tail_tol;
    std::size_t max_steps = 5'000'000;
};

// Solves dP/dt = G P from t = 0 and samples at sample_times (strictly
// increasing, within [0, t_end]).
EvolutionTrace evolve(const PhononDistribution& initial, const GeneratorMatrix& gen, double t_end,
                      std::span<const double> sample_times, const EvolveOptions& options = {});

// Periodic picture: damping for 1/r_a, then an instantaneous kick.
struct StroboscopicTrace {
    std::vector<double> kick_times;  // s
    std::vector<double> mean_before;
    std::vector<double> mean_after;
    std::vector<double> p0_before;
    std::vector<double> p0_after;
    PhononDistribution final_state;
};

StroboscopicTrace evolve_stroboscopic(const PhononDistribution& initial, const ProtocolParams& params,
                                      const KickMap& kick, std::size_t n_kicks, const EvolveOptions& options = {});

enum class SteadyStateMethod { analytic_product, null_space, long_time };

struct SteadyStateResult {
    PhononDistribution populations;
    double mean_n_s;
    double delta_n;  // mean phonon number removed by one kick from the steady state
    double p0_s;
    SteadyStateMethod method;
};

// Product-form (detailed balance) solution
//   p_n / p_{n-1} = (n_th n + p_e ce2[n-1] r_a/kappa) / ((n_th+1) n + (1-p_e) ce2[n-1] r_a/kappa)
// The truncation grows from n_max until the tail is below tail_tol.
SteadyStateResult steady_state_analytic(const ProtocolParams& params, const KickMap& kick, std::size_t n_max,
                                        double tail_tol = default_tail_tol);

// Kernel of the generator by banded elimination inside its unique closed
// class. Throws DegenerateKernel if more than one closed class exists, with
// rates below 1e-8 of the largest rate treated as absent.
SteadyStateResult steady_state_numeric(const GeneratorMatrix& gen, Diagnostics* diag = nullptr);

struct LongTimeOptions {
    double residual_tol = 1e-12;  // ||G P||_inf in units of gen.rate_scale()
    double rtol = 1e-10;
    double atol = 1e-13;
    std::size_t max_chunks = 400;
};

// Integrates from the thermal state (or `initial`) until ||dP/dt|| is below
// tolerance.
SteadyStateResult steady_state_long_time(const GeneratorMatrix& gen, const LongTimeOptions& options = {},
                                         std::optional<PhononDistribution> initial = std::nullopt);

// mean_phonon(dist) - mean_phonon(apply_kick(dist, kick))
double kick_fluctuation(const PhononDistribution& dist, const KickMap& kick);

} // namespace phononcool
