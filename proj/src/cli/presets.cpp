#include <array>
#include <utility>

#include "phononcool/cli/config.hpp"

namespace phononcool::cli {

namespace {

// Experimental device estimate. Angular frequencies and rates are in units of
// 1e6 per second ("MHz"), not divided by 2 pi.
constexpr std::string_view device_section = R"(
[device]
# resonator frequency 2 pi x 100 MHz
omega0_mhz = 2*pi*100
# quality factor 2e5; kappa = omega0/Q = pi x 1e-3 MHz
q = 2e5
# Josephson splitting with the kick off, 4 pi x 1e4 MHz (about 100 ueV)
ej_mhz = 4*pi*1e4
# mutual capacitances C_x = C_g = 20 aF; total capacitance 250 aF
cx_af = 20
cg_af = 20
cj_af = 210
# resonator bias voltage
vx_v = 0.25
# fluctuation impedance of the gate and bias lines
r_ohm = 50
# dilution-refrigerator temperature 0.01 K
temperature_mk = 10
# estimated coupling 2 pi x 10 MHz (mass and gap are not given)
g_mhz = 2*pi*10
# kick of 25 ns, so that g tau = pi/2
tau_ns = 25
# kick repetition rate 3 MHz, period about 0.3 us
ra_mhz = 3
# qubit reset window of ten Gamma(E_J) lifetimes
reset_multiplier = 10
)";

constexpr std::string_view fig2_text = R"(# Cooling transient: thermal start at N_th = 1.7, r_a/kappa = 133, g tau = pi/8.
[protocol]
# initial and bath phonon number
n_th = 1.7
# kick rate in units of the resonator damping
ra_over_kappa = 133
# pulse area g tau
pulse_area = pi/8
# device coupling 2 pi x 10 MHz and damping pi x 1e-3 MHz set the absolute time scale
g_mhz = 2*pi*10
kappa_mhz = pi*1e-3
# qubit reset to the ground state before every kick
p_e = 0

[run]
# time axis in units of 1/r_a
t_end_ra = 100
samples = 201
n_kicks = 400
initial = thermal
)";

constexpr std::string_view device_paper_text = device_section;

} // namespace

std::optional<std::string_view> preset_text(std::string_view name)
{
    // Final-occupation diagram: N_th from 1e-2 to 1e3 at r_a/kappa = 1e2 and 1e3,
    // ideal reset (p = 0) and thermal reset errors p = 1e-4 and 1e-5, |c_e0| = 1.
    static const std::string fig3 = std::string(device_section) + R"(
[sweep]
n_th_min = 1e-2
n_th_max = 1e3
n_th_count = 61
ra_over_kappa = 1e2, 1e3
p = 0, 1e-4, 1e-5
# maximum-cooling pulse area, |c_e0| = 1
pulse_area = pi/2
# only the thermal excitation correction is applied by default
with_fidelity = false
)";
    static const std::array<std::pair<std::string_view, std::string_view>, 3> table{{
        {"fig2", fig2_text},
        {"fig3", fig3},
        {"device-paper", device_paper_text},
    }};
    for (const auto& [n, text] : table) {
        if (n == name) {
            return text;
        }
    }
    return std::nullopt;
}

std::vector<std::string_view> preset_names() { return {"fig2", "fig3", "device-paper"}; }

} // namespace phononcool::cli
