#include "phononcool/device.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "phononcool/constants.hpp"

namespace phononcool {

namespace {

void require_positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string("device parameter ") + name + " must be positive");
    }
}

} // namespace

void DeviceParams::validate() const
{
    require_positive(E_J, "E_J");
    require_positive(C_x, "C_x");
    require_positive(C_g, "C_g");
    require_positive(C_J, "C_J");
    require_positive(std::abs(V_x), "|V_x|");
    require_positive(R, "R");
    require_positive(T, "T");
    require_positive(omega0, "omega0");
    require_positive(Q, "Q");
    if (E_c) {
        require_positive(*E_c, "E_c");
    }
    if (mass.has_value() != gap.has_value()) {
        throw DomainError("resonator mass and gap must be given together");
    }
    if (mass) {
        require_positive(*mass, "mass");
        require_positive(*gap, "gap");
    }
    if (g_override) {
        require_positive(*g_override, "g");
    }
    if (!g_override && !mass) {
        throw DomainError("coupling needs either g or both mass and gap");
    }
}

double DeviceParams::charging_energy() const
{
    if (E_c) {
        return *E_c;
    }
    return si::elementary_charge * si::elementary_charge / (2.0 * total_capacitance());
}

double DeviceParams::cooper_pair_number() const { return C_x * V_x / (2.0 * si::elementary_charge); }

double DeviceParams::fluctuation_coupling() const
{
    // 2 (e^2 R / hbar) (C_x^2 + C_g^2) / (pi C_sigma^2)
    const double conductance_ratio = si::elementary_charge * si::elementary_charge * R / si::hbar;
    const double cs = total_capacitance();
    return 2.0 * conductance_ratio * (C_x * C_x + C_g * C_g) / (si::pi * cs * cs);
}

double DeviceParams::decay_rate() const { return omega0 / Q; }

double DeviceParams::thermal_phonon_number() const
{
    return 1.0 / std::expm1(si::hbar * omega0 / (si::boltzmann * T));
}

std::optional<double> DeviceParams::coupling_from_geometry() const
{
    if (!mass || !gap) {
        return std::nullopt;
    }
    const double x_zpf = std::sqrt(si::hbar / (2.0 * *mass * omega0));
    return 4.0 * charging_energy() * cooper_pair_number() * x_zpf / (*gap * si::hbar);
}

double DeviceParams::coupling() const
{
    const auto geo = coupling_from_geometry();
    if (g_override && geo) {
        if (std::abs(*geo - *g_override) > 0.2 * *g_override) {
            std::ostringstream os;
            os << "coupling from mass and gap (" << *geo << " rad/s) disagrees with g (" << *g_override
               << " rad/s) by more than 20%";
            throw DomainError(os.str());
        }
        return *g_override;
    }
    if (g_override) {
        return *g_override;
    }
    if (geo) {
        return *geo;
    }
    throw DomainError("coupling needs either g or both mass and gap");
}

double temperature_from_phonon_number(double omega0, double n_th)
{
    if (!(omega0 > 0.0) || !(n_th > 0.0)) {
        throw DomainError("temperature inversion needs omega0 > 0 and n_th > 0");
    }
    return si::hbar * omega0 / (si::boltzmann * std::log1p(1.0 / n_th));
}

std::pair<ProtocolParams, QubitEnvironment> derive_protocol(const DeviceParams& dev, const KickTiming& timing)
{
    dev.validate();
    ProtocolParams p;
    p.g = dev.coupling();
    p.tau = timing.pulse_area ? *timing.pulse_area / p.g : timing.tau;
    p.r_a = timing.r_a;
    p.kappa = dev.decay_rate();
    p.n_th = dev.thermal_phonon_number();

    QubitEnvironment env;
    env.alpha_g = dev.fluctuation_coupling();
    env.temperature = dev.T;
    env.E_J = dev.E_J;
    env.omega0 = dev.omega0;

    p.p_e = thermal_excitation_probability(env);
    p.validate();
    return {p, env};
}

ScheduleReport duty_cycle_schedule(const ScheduleInputs& in)
{
    if (!(in.g > 0.0) || !(in.gamma_EJ > 0.0) || !(in.r_a > 0.0) || !(in.tau > 0.0) ||
        !(in.reset_multiplier > 0.0)) {
        throw DomainError("schedule inputs must be positive");
    }
    ScheduleReport r;
    r.period = 1.0 / in.r_a;
    r.reset_time = std::isinf(in.gamma_EJ) ? 0.0 : in.reset_multiplier / in.gamma_EJ;
    r.cycle_time = in.tau + r.reset_time;
    r.max_rate = 1.0 / r.cycle_time;
    r.reset_fidelity = 1.0 - std::exp(-in.reset_multiplier);
    r.budget_closes = r.cycle_time <= r.period;

    auto flag = [&r](const std::string& what, double value) {
        std::ostringstream os;
        os << what << " (" << value << ")";
        r.violations.push_back(os.str());
    };
    if (!r.budget_closes) {
        flag("cycle budget: tau + reset exceeds 1/r_a, cycle time in s", r.cycle_time);
    }
    if (in.gamma0) {
        if (in.g < 10.0 * *in.gamma0) {
            flag("g is not much larger than Gamma(omega0): g/Gamma0", in.g / *in.gamma0);
        }
        if (*in.gamma0 * in.tau > 0.1) {
            flag("Gamma(omega0) tau is not small", *in.gamma0 * in.tau);
        }
    }
    if (in.kappa) {
        if (in.g < 10.0 * *in.kappa) {
            flag("g is not much larger than kappa: g/kappa", in.g / *in.kappa);
        }
        if (*in.kappa * in.tau > 0.01) {
            flag("kappa tau is not small", *in.kappa * in.tau);
        }
    }
    return r;
}

} // namespace phononcool
