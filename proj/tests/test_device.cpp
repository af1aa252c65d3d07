#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "phononcool/constants.hpp"
#include "phononcool/device.hpp"

using namespace phononcool;
using std::numbers::pi;

namespace {

DeviceParams reference_device()
{
    DeviceParams d;
    d.E_J = si::hbar * 4.0 * pi * 1e10;
    d.C_x = 20.0 * si::attofarad;
    d.C_g = 20.0 * si::attofarad;
    d.C_J = 210.0 * si::attofarad;
    d.V_x = 0.25;
    d.R = 50.0;
    d.T = 10.0 * si::millikelvin;
    d.omega0 = 2.0 * pi * 1e8;
    d.Q = 2e5;
    d.g_override = 2.0 * pi * 1e7;
    return d;
}

} // namespace

TEST_CASE("derived device quantities")
{
    const auto d = reference_device();
    CHECK_NOTHROW(d.validate());
    CHECK(d.cooper_pair_number() == doctest::Approx(15.0).epsilon(0.10));
    CHECK(d.cooper_pair_number() == doctest::Approx(15.6).epsilon(0.01));
    CHECK(d.decay_rate() == doctest::Approx(pi * 1e3).epsilon(1e-14));
    CHECK(d.fluctuation_coupling() == doctest::Approx(1e-4).epsilon(0.20));
    CHECK(d.charging_energy() / si::micro_ev == doctest::Approx(320.0).epsilon(0.01));

    const double x = si::hbar * d.omega0 / (si::boltzmann * d.T);
    CHECK(d.thermal_phonon_number() == doctest::Approx(1.0 / (std::exp(x) - 1.0)).epsilon(1e-12));
}

TEST_CASE("coupling sources")
{
    auto d = reference_device();
    d.g_override.reset();
    CHECK_THROWS_AS(d.validate(), DomainError);

    d.mass = 1e-16;
    d.gap = 1e-7;
    CHECK_NOTHROW(d.validate());
    const double e_c = si::elementary_charge * si::elementary_charge / (2.0 * 250.0 * si::attofarad);
    const double n_x = 20.0 * si::attofarad * 0.25 / (2.0 * si::elementary_charge);
    const double expect = 4.0 * e_c * n_x * std::sqrt(si::hbar / (2.0 * 1e-16 * d.omega0)) / (1e-7 * si::hbar);
    CHECK(d.coupling() == doctest::Approx(expect).epsilon(1e-12));

    d.g_override = expect * 1.1;
    CHECK(d.coupling() == doctest::Approx(expect * 1.1));
    d.g_override = expect * 2.0;
    CHECK_THROWS_AS(d.coupling(), DomainError);

    d.gap.reset();
    CHECK_THROWS_AS(d.validate(), DomainError);

    auto e = reference_device();
    e.E_c = 100.0 * si::micro_ev;
    CHECK(e.charging_energy() == 100.0 * si::micro_ev);
    e.Q = 0.0;
    CHECK_THROWS_AS(e.validate(), DomainError);
}

TEST_CASE("protocol derivation")
{
    const auto d = reference_device();
    const auto [p, env] = derive_protocol(d, {.tau = 25e-9, .r_a = 3e6});
    CHECK(p.g == d.g_override.value());
    CHECK(p.tau == 25e-9);
    CHECK(p.kappa == doctest::Approx(pi * 1e3));
    CHECK(p.n_th == doctest::Approx(d.thermal_phonon_number()));
    CHECK(p.p_e < 1e-40);
    CHECK(env.alpha_g == doctest::Approx(d.fluctuation_coupling()));
    CHECK(env.temperature == d.T);

    const auto [q, env2] = derive_protocol(d, {.tau = 1.0, .r_a = 3e6, .pulse_area = pi / 2});
    CHECK(q.pulse_area() == doctest::Approx(pi / 2).epsilon(1e-15));
    (void)env2;

    SUBCASE("all rates positive and strong coupling")
    {
        CHECK(p.g > 0.0);
        CHECK(p.kappa > 0.0);
        CHECK(p.r_a > 0.0);
        CHECK(relaxation_rate(env, env.omega0) > 0.0);
        CHECK(relaxation_rate(env, env.E_J / si::hbar) > 0.0);
        CHECK(p.g / p.kappa > 1e3);
    }
}

TEST_CASE("temperature round trip")
{
    for (double t : {1e-3, 4.8e-3, 0.01, 0.1, 1.0}) {
        auto d = reference_device();
        d.T = t;
        const auto [p, env] = derive_protocol(d, {.tau = 25e-9, .r_a = 3e6});
        CHECK(temperature_from_phonon_number(d.omega0, p.n_th) == doctest::Approx(t).epsilon(1e-10));
        (void)env;
    }
    CHECK_THROWS_AS(temperature_from_phonon_number(1.0, 0.0), DomainError);
}

TEST_CASE("duty-cycle schedule")
{
    const ScheduleInputs base{.g = 2.0 * pi * 1e7, .gamma_EJ = 40e6, .r_a = 3e6, .tau = 25e-9};

    SUBCASE("reference budget closes")
    {
        const auto r = duty_cycle_schedule(base);
        CHECK(r.budget_closes);
        CHECK(r.ok());
        CHECK(r.reset_time == doctest::Approx(0.25e-6));
        CHECK(r.cycle_time == doctest::Approx(0.275e-6));
        CHECK(r.cycle_time < r.period);
        CHECK(r.reset_fidelity == doctest::Approx(1.0 - std::exp(-10.0)));
    }
    SUBCASE("instant reset leaves only the kick")
    {
        auto in = base;
        in.gamma_EJ = std::numeric_limits<double>::infinity();
        CHECK(duty_cycle_schedule(in).max_rate == doctest::Approx(1.0 / in.tau));
        in.gamma_EJ = 1e15;
        CHECK(duty_cycle_schedule(in).max_rate == doctest::Approx(1.0 / in.tau).epsilon(1e-6));
    }
    SUBCASE("kick rate faster than the kick itself")
    {
        auto in = base;
        in.r_a = 100e6;
        const auto r = duty_cycle_schedule(in);
        CHECK_FALSE(r.budget_closes);
        CHECK_FALSE(r.violations.empty());
    }
    SUBCASE("separation assumptions")
    {
        auto in = base;
        in.gamma0 = 0.5e6;
        in.kappa = pi * 1e3;
        CHECK(duty_cycle_schedule(in).ok());
        in.gamma0 = 20e6;
        CHECK(duty_cycle_schedule(in).violations.size() == 2);
        in.kappa = 1e7;
        CHECK(duty_cycle_schedule(in).violations.size() == 4);
    }
    SUBCASE("inputs must be positive")
    {
        auto in = base;
        in.tau = 0.0;
        CHECK_THROWS_AS(duty_cycle_schedule(in), DomainError);
    }
}
