#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "phononcool/constants.hpp"
#include "phononcool/corrections.hpp"
#include "phononcool/dynamics.hpp"
#include "test_support.hpp"

using namespace phononcool;
using std::numbers::pi;

namespace {

constexpr double g_ref = 2.0 * pi * 1e7;
constexpr double kappa_ref = pi * 1e3;

QubitEnvironment environment(double alpha_g = 1e-4, double temperature = 0.01)
{
    QubitEnvironment env;
    env.alpha_g = alpha_g;
    env.temperature = temperature;
    env.E_J = si::hbar * 4.0 * pi * 1e10;
    env.omega0 = 2.0 * pi * 1e8;
    return env;
}

// Direct Gamma(w) evaluation written out with tanh, independent of the library form.
double gamma_reference(double alpha_g, double omega, double temperature)
{
    const double x = si::hbar * omega / (2.0 * si::boltzmann * temperature);
    return pi * alpha_g * omega * (1.0 / std::tanh(x) + 1.0) / 2.0;
}

// Composite Simpson rule for 1 - gamma0 * int_0^tau sin^2(g sqrt(l) t) dt.
double fidelity_quadrature(double gamma0, double g, double tau, std::size_t level)
{
    const int n = 2000;
    const double h = tau / n;
    const double w = g * std::sqrt(static_cast<double>(level));
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double s = std::sin(w * h * i);
        const double weight = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += weight * s * s;
    }
    return 1.0 - gamma0 * acc * h / 3.0;
}

} // namespace

TEST_CASE("relaxation rate")
{
    SUBCASE("cold limit")
    {
        const auto env = environment(1e-4, 1e-6);
        CHECK(relaxation_rate(env, 1e9) == doctest::Approx(pi * 1e-4 * 1e9).epsilon(1e-12));
    }
    SUBCASE("matches a direct evaluation")
    {
        for (double t : {1e-3, 0.01, 0.1, 1.0}) {
            for (double w : {1e6, 6e8, 1e11}) {
                CHECK(relaxation_rate(environment(1e-4, t), w) ==
                      doctest::Approx(gamma_reference(1e-4, w, t)).epsilon(1e-12));
            }
        }
    }
    SUBCASE("reset rate at the qubit splitting")
    {
        const auto env = environment();
        CHECK(relaxation_rate(env, env.E_J / si::hbar) == doctest::Approx(40e6).epsilon(0.15));
        // The same coupling at a 100 ueV splitting gives a faster reset.
        const double w = 100.0 * si::micro_ev / si::hbar;
        CHECK(relaxation_rate(env, w) == doctest::Approx(pi * 1e-4 * w).epsilon(1e-9));
    }
    SUBCASE("decay rate at the resonator frequency")
    {
        const auto env = environment();
        CHECK(relaxation_rate(env, env.omega0) == doctest::Approx(0.56e6).epsilon(0.30));
    }
    SUBCASE("domain")
    {
        CHECK_THROWS_AS(relaxation_rate(environment(), 0.0), DomainError);
        CHECK_THROWS_AS(relaxation_rate(environment(), -1.0), DomainError);
        CHECK_THROWS_AS(relaxation_rate(environment(1e-4, 0.0), 1.0), DomainError);
    }
}

TEST_CASE("property: relaxation rate grows with frequency and temperature")
{
    const auto env = environment();
    double last = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double w = env.omega0 * std::pow(env.E_J / si::hbar / env.omega0, i / 200.0);
        const double r = relaxation_rate(env, w);
        CHECK(r > last);
        last = r;
    }
    last = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double r = relaxation_rate(environment(1e-4, 1e-3 * std::pow(1e3, i / 100.0)), env.omega0);
        CHECK(r > last);
        last = r;
    }
}

TEST_CASE("thermal excitation probability")
{
    auto env = environment();
    env.E_J = 0.0;
    CHECK(thermal_excitation_probability(env) == 0.5);

    env.E_J = 100.0 * si::micro_ev;
    const double p = thermal_excitation_probability(env);
    CHECK(p > 0.0);
    CHECK(p < 1e-40);

    env.E_J = 1e3 * si::boltzmann * env.temperature;
    CHECK(thermal_excitation_probability(env) < 1e-300);

    env.E_J = si::boltzmann * env.temperature;
    CHECK(thermal_excitation_probability(env) == doctest::Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-14));
}

TEST_CASE("kick fidelity")
{
    const double tau = 25e-9;
    const double g = (pi / 2) / tau;
    CHECK(kick_fidelity(0.0, g, tau, 1) == 1.0);
    CHECK(kick_fidelity(1e6, g, tau, 1) == doctest::Approx(1.0 - 1e6 * tau / 2).epsilon(1e-15));
    CHECK(1.0 - kick_fidelity(0.56e6, g, tau, 1) == doctest::Approx(7e-3).epsilon(1e-12));

    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double gamma0 = 1e6 * u(rng);
        const double t = 1e-8 + 5e-8 * u(rng);
        const std::size_t level = 1 + static_cast<std::size_t>(40 * u(rng));
        CHECK(kick_fidelity(gamma0, g_ref, t, level) ==
              doctest::Approx(fidelity_quadrature(gamma0, g_ref, t, level)).epsilon(1e-10));
    }

    Diagnostics diag;
    kick_fidelity(1e8, g, tau, 1, &diag);
    CHECK(diag.has(WarningCode::first_order_validity));
    CHECK_THROWS_AS(kick_fidelity(1e6, g, tau, 0), DomainError);
}

TEST_CASE("corrected steady state")
{
    SUBCASE("reduces to the uncorrected product formula")
    {
        for (double area : {pi / 8, pi / 2}) {
            for (double n_th : {0.1, 1.7, 30.0}) {
                const auto p = ProtocolParams::from_ratios(g_ref, area, kappa_ref, 133.0, n_th);
                const auto n_max = default_n_max(n_th);
                const auto a = steady_state_analytic(p, build_kick_map(p.g, p.tau, 0.0, n_max), n_max);
                const auto b = corrected_steady_state(p, environment(0.0), n_max, {.p_override = 0.0});
                REQUIRE(a.populations.size() == b.populations.size());
                for (std::size_t n = 0; n < a.populations.size(); ++n) {
                    CHECK(a.populations[n] == b.populations[n]);
                }
            }
        }
    }
    SUBCASE("excitation floor at zero temperature")
    {
        const auto p = ProtocolParams::from_ratios(g_ref, pi / 2, kappa_ref, 1e3, 0.0);
        const auto s = corrected_steady_state(p, environment(0.0), 60, {.p_override = 1e-4});
        CHECK(s.populations[1] / s.populations[0] == doctest::Approx(0.1 / 1000.9).epsilon(1e-12));
        CHECK(s.mean_n_s == doctest::Approx(1e-4).epsilon(0.05));
    }
    SUBCASE("generalized generator agrees with the modified formula")
    {
        for (double p_exc : {1e-5, 1e-3, 0.1}) {
            for (double n_th : {0.0, 0.5, 5.0}) {
                const auto p = ProtocolParams::from_ratios(g_ref, pi / 8, kappa_ref, 133.0, n_th, p_exc);
                const auto n_max = default_n_max(n_th);
                const auto s = corrected_steady_state(p, environment(0.0), n_max,
                                                      {.p_override = p_exc, .apply_fidelity = false});
                const auto gen = build_generator(p, build_kick_map(p.g, p.tau, p_exc, s.populations.n_max()),
                                                 s.populations.n_max());
                const auto numeric = steady_state_numeric(gen);
                CHECK(testing::max_abs_diff(s.populations, numeric.populations) < 1e-8);
            }
        }
    }
    SUBCASE("flattening below the ideal curve")
    {
        const auto ratio_of = [](double n_th, double p_exc) {
            const auto p = ProtocolParams::from_ratios(g_ref, pi / 2, kappa_ref, 1e3, n_th);
            return corrected_steady_state(p, environment(0.0), default_n_max(n_th), {.p_override = p_exc})
                .mean_n_s;
        };
        const double ideal_slope = std::log(ratio_of(1e-2, 0.0) / ratio_of(1e-3, 0.0));
        const double floor_slope = std::log(ratio_of(1e-2, 1e-5) / ratio_of(1e-3, 1e-5));
        CHECK(ideal_slope == doctest::Approx(std::log(10.0)).epsilon(0.02));
        CHECK(floor_slope < 0.5 * ideal_slope);
    }
}

TEST_CASE("property: corrections never improve cooling")
{
    for (double area : {pi / 8, pi / 2}) {
        for (double n_th : {0.05, 1.0, 20.0}) {
            const auto p = ProtocolParams::from_ratios(g_ref, area, kappa_ref, 133.0, n_th);
            const auto n_max = default_n_max(n_th);
            double last = -1.0;
            for (double p_exc : {0.0, 1e-5, 1e-4, 1e-3, 1e-2, 0.1}) {
                const double m =
                    corrected_steady_state(p, environment(0.0), n_max, {.p_override = p_exc}).mean_n_s;
                CHECK(m >= last);
                last = m;
            }
            last = -1.0;
            for (double alpha : {0.0, 1e-5, 1e-4, 1e-3, 1e-2}) {
                const double m = corrected_steady_state(p, environment(alpha), n_max, {.p_override = 0.0})
                                     .mean_n_s;
                CHECK(m >= last);
                last = m;
            }
        }
    }
}

TEST_CASE("cooling floor")
{
    auto p = ProtocolParams::from_ratios(g_ref, pi / 2, kappa_ref, 1e3, 1.0);
    CHECK(cooling_floor(p, environment(0.0), 0.0) == 0.0);
    p.tau = 25e-9;
    // alpha_g chosen so that Gamma(omega0) = 0.56 MHz exactly
    const auto unit = environment(1.0);
    const auto env = environment(0.56e6 / relaxation_rate(unit, unit.omega0));
    CHECK(cooling_floor(p, env) == doctest::Approx(7e-3).epsilon(1e-9));
    p.n_th = 0.0;
    CHECK(cooling_floor(p, environment(), 1e-4) == doctest::Approx(1e-4).epsilon(1e-12));
}
