// device.hpp - physical circuit parameters mapped onto protocol parameters

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phononcool/corrections.hpp"
#include "phononcool/model.hpp"

namespace phononcool {

// SI units throughout.
struct DeviceParams {
    double E_J = 0.0;                  // J
    std::optional<double> E_c;         // J; derived from the total capacitance when absent
    double C_x = 0.0;                  // F, qubit-resonator distribution capacitance
    double C_g = 0.0;                  // F, gate capacitance
    double C_J = 0.0;                  // F, junction capacitance
    double V_x = 0.0;                  // V, resonator bias
    double V_g = 0.0;                  // V, gate voltage (does not enter any derived quantity)
    double R = 0.0;                    // ohm, fluctuation impedance
    double T = 0.0;                    // K
    double omega0 = 0.0;               // rad/s
    double Q = 0.0;
    std::optional<double> mass;        // kg
    std::optional<double> gap;         // m, resonator-box distance
    std::optional<double> g_override;  // rad/s

    void validate() const;

    double total_capacitance() const { return C_x + C_g + C_J; }
    double charging_energy() const;         // e^2 / (2 C_sigma) unless E_c is given
    double cooper_pair_number() const;      // n_x = C_x V_x / (2e)
    double fluctuation_coupling() const;    // alpha_g
    double decay_rate() const;              // kappa = omega0 / Q
    double thermal_phonon_number() const;   // 1 / (exp(hbar omega0 / k_B T) - 1)
    std::optional<double> coupling_from_geometry() const;  // needs mass and gap
    double coupling() const;                // g_override, else geometry
};

// Inverse of the Bose-Einstein occupation: T such that n_th phonons at omega0.
double temperature_from_phonon_number(double omega0, double n_th);

struct KickTiming {
    double tau = 0.0;                   // s; ignored when pulse_area is set
    double r_a = 0.0;                   // 1/s
    std::optional<double> pulse_area;   // g tau, rad
};

std::pair<ProtocolParams, QubitEnvironment> derive_protocol(const DeviceParams& dev, const KickTiming& timing);

struct ScheduleInputs {
    double g = 0.0;         // rad/s
    double gamma_EJ = 0.0;  // 1/s, qubit reset rate with the kick off
    double r_a = 0.0;       // 1/s
    double tau = 0.0;       // s
    double reset_multiplier = 10.0;
    std::optional<double> gamma0;  // 1/s, qubit decay during the kick
    std::optional<double> kappa;   // 1/s
};

struct ScheduleReport {
    double period = 0.0;          // 1/r_a
    double reset_time = 0.0;      // reset_multiplier / gamma_EJ
    double cycle_time = 0.0;      // tau + reset_time
    double max_rate = 0.0;        // 1 / cycle_time
    double reset_fidelity = 0.0;  // 1 - exp(-reset_multiplier)
    bool budget_closes = false;
    std::vector<std::string> violations;

    bool ok() const { return budget_closes && violations.empty(); }
};

ScheduleReport duty_cycle_schedule(const ScheduleInputs& in);

} // namespace phononcool
