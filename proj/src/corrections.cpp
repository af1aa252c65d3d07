#include "phononcool/corrections.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "phononcool/constants.hpp"
#include "product_form.hpp"

namespace phononcool {

void QubitEnvironment::validate() const
{
    if (!(alpha_g >= 0.0)) {
        throw DomainError("alpha_g must be non-negative");
    }
    if (!(temperature > 0.0)) {
        throw DomainError("temperature must be positive");
    }
    if (!(E_J >= 0.0)) {
        throw DomainError("Josephson energy must be non-negative");
    }
    if (!(omega0 > 0.0)) {
        throw DomainError("resonator frequency must be positive");
    }
}

double relaxation_rate(const QubitEnvironment& env, double omega)
{
    if (!(omega > 0.0)) {
        throw DomainError("relaxation rate needs a positive frequency");
    }
    if (!(env.alpha_g >= 0.0) || !(env.temperature > 0.0)) {
        throw DomainError("relaxation rate needs alpha_g >= 0 and T > 0");
    }
    const double x = si::hbar * omega / (2.0 * si::boltzmann * env.temperature);
    const double coth = 1.0 / std::tanh(x);
    return si::pi * env.alpha_g * omega * (coth + 1.0) / 2.0;
}

double thermal_excitation_probability(const QubitEnvironment& env)
{
    if (!(env.E_J >= 0.0) || !(env.temperature > 0.0)) {
        throw DomainError("excitation probability needs E_J >= 0 and T > 0");
    }
    const double boltz = std::exp(-env.E_J / (si::boltzmann * env.temperature));
    return boltz / (1.0 + boltz);
}

double kick_fidelity(double gamma0, double g, double tau, std::size_t level, Diagnostics* diag)
{
    if (level < 1) {
        throw DomainError("fidelity level must be >= 1");
    }
    if (!(gamma0 >= 0.0) || !(g > 0.0) || !(tau > 0.0)) {
        throw DomainError("fidelity needs gamma0 >= 0 and positive g, tau");
    }
    const double w = g * std::sqrt(static_cast<double>(level));
    const double excited_time = tau / 2.0 - std::sin(2.0 * w * tau) / (4.0 * w);
    const double f = 1.0 - gamma0 * excited_time;
    if (gamma0 * tau > 0.1) {
        std::ostringstream os;
        os << "Gamma0*tau = " << gamma0 * tau << " > 0.1: first-order fidelity correction is not small";
        warn(diag, WarningCode::first_order_validity, os.str());
    }
    if (f < 0.9) {
        std::ostringstream os;
        os << "kick fidelity F_" << level - 1 << " = " << f << " < 0.9";
        warn(diag, WarningCode::first_order_validity, os.str());
    }
    return f;
}

SteadyStateResult corrected_steady_state(const ProtocolParams& params, const QubitEnvironment& env,
                                         std::size_t n_max, const CorrectionOptions& options, Diagnostics* diag)
{
    params.validate();
    env.validate();
    const double p = options.p_override ? *options.p_override : thermal_excitation_probability(env);
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("excitation probability must lie in [0, 1]");
    }
    const double gamma0 = options.apply_fidelity ? relaxation_rate(env, env.omega0) : 0.0;
    const double theta = params.pulse_area();

    std::vector<double> fidelity;  // cached per level, F_{l-1} at index l-1
    auto coupling = [&](std::size_t n) {
        const KickMap k = build_kick_map_for_area(theta, p, n);
        std::vector<double> c(k.ce2.begin(), k.ce2.end() - 1);
        if (options.apply_fidelity) {
            for (std::size_t l = fidelity.size() + 1; l <= n; ++l) {
                fidelity.push_back(kick_fidelity(gamma0, params.g, params.tau, l, l == 1 ? diag : nullptr));
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (fidelity[i] < 0.0) {
                    throw DomainError("kick fidelity is negative; first-order correction invalid");
                }
                c[i] *= fidelity[i];
            }
        }
        return c;
    };
    auto pops = detail::solve_product_form(params.n_th, params.kappa, params.r_a, p, coupling, n_max,
                                           default_tail_tol);
    const KickMap kick = build_kick_map_for_area(theta, p, pops.n_max());
    const double mean = mean_phonon(pops);
    const double dn = kick_fluctuation(pops, kick);
    const double p0 = pops[0];
    return {std::move(pops), mean, dn, p0, SteadyStateMethod::analytic_product};
}

double cooling_floor(const ProtocolParams& params, const QubitEnvironment& env, std::optional<double> p_override)
{
    env.validate();
    const double p = p_override ? *p_override : thermal_excitation_probability(env);
    const double gamma0 = relaxation_rate(env, env.omega0);
    return p + params.n_th * gamma0 * params.tau / 2.0;
}

} // namespace phononcool
