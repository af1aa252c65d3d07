// corrections.hpp - first-order qubit dissipation and thermal-excitation corrections

#pragma once

#include <cstddef>
#include <optional>

#include "phononcool/dynamics.hpp"

namespace phononcool {

struct QubitEnvironment {
    double alpha_g = 0.0;      // dimensionless gate-charge fluctuation coupling
    double temperature = 0.0;  // K
    double E_J = 0.0;          // J, qubit splitting when the kick is off
    double omega0 = 0.0;       // rad/s, resonator frequency

    void validate() const;
};

// Gamma(w) = pi alpha_g w [coth(hbar w / 2 k_B T) + 1] / 2, in 1/s.
double relaxation_rate(const QubitEnvironment& env, double omega);

// p = 1 / (1 + exp(E_J / k_B T)); returns 1/2 for E_J = 0.
double thermal_excitation_probability(const QubitEnvironment& env);

// F_{l-1} = 1 - Gamma0 * integral_0^tau sin^2(g sqrt(l) t) dt
//         = 1 - Gamma0 [tau/2 - sin(2 g sqrt(l) tau) / (4 g sqrt(l))]
double kick_fidelity(double gamma0, double g, double tau, std::size_t level, Diagnostics* diag = nullptr);

struct CorrectionOptions {
    std::optional<double> p_override;  // replaces the thermal p from env
    bool apply_fidelity = true;
};

// Product-form steady state with ce2[l-1] -> ce2[l-1] F_{l-1} and the qubit
// entering each kick excited with probability p.
SteadyStateResult corrected_steady_state(const ProtocolParams& params, const QubitEnvironment& env,
                                         std::size_t n_max, const CorrectionOptions& options = {},
                                         Diagnostics* diag = nullptr);

// p + n_th Gamma(omega0) tau / 2
double cooling_floor(const ProtocolParams& params, const QubitEnvironment& env,
                     std::optional<double> p_override = std::nullopt);

} // namespace phononcool
