#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "phononcool/model.hpp"
#include "test_support.hpp"

using namespace phononcool;
using std::numbers::pi;

TEST_CASE("kick map coefficients")
{
    SUBCASE("full swap at pulse area pi/2")
    {
        const auto k = build_kick_map(2.0, pi / 4.0, 0.0, 10);
        CHECK(k.ce2[0] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(k.theta == doctest::Approx(pi / 2));
    }
    SUBCASE("ground level never moves")
    {
        for (double theta : {0.1, 1.0, pi / 8, 3.0, 11.0}) {
            CHECK(build_kick_map_for_area(theta, 0.0, 5).cg2[0] == 1.0);
        }
    }
    SUBCASE("half-angle value at pi/8")
    {
        const auto k = build_kick_map_for_area(pi / 8, 0.0, 4);
        CHECK(k.ce2[0] == doctest::Approx((1.0 - std::cos(pi / 4)) / 2.0).epsilon(1e-14));
        CHECK(k.ce2[0] == doctest::Approx(0.146447).epsilon(1e-6));
    }
    SUBCASE("complementary entries and range")
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.0, 4.0 * pi);
        for (int trial = 0; trial < 50; ++trial) {
            const auto k = build_kick_map_for_area(u(rng), 0.0, 80);
            for (std::size_t n = 0; n < 80; ++n) {
                CHECK(std::abs(k.ce2[n] + k.cg2[n + 1] - 1.0) < 1e-12);
            }
            for (std::size_t n = 0; n <= 80; ++n) {
                CHECK(k.ce2[n] >= 0.0);
                CHECK(k.ce2[n] <= 1.0);
                CHECK(k.cg2[n] >= 0.0);
                CHECK(k.cg2[n] <= 1.0);
            }
        }
    }
    SUBCASE("domain errors")
    {
        CHECK_THROWS_AS(build_kick_map(0.0, 1.0, 0.0, 10), DomainError);
        CHECK_THROWS_AS(build_kick_map(1.0, -1.0, 0.0, 10), DomainError);
        CHECK_THROWS_AS(build_kick_map(1.0, 1.0, 1.5, 10), DomainError);
        CHECK_THROWS_AS(build_kick_map(1.0, 1.0, 0.0, 0), DomainError);
    }
}

TEST_CASE("distribution construction")
{
    const PhononDistribution d({2.0, 1.0, 1.0});
    CHECK(d[0] == doctest::Approx(0.5));
    CHECK(d.n_max() == 2);

    const PhononDistribution clamped({0.5, -1e-13, 0.5});
    CHECK(clamped[1] == 0.0);

    CHECK_THROWS_AS(PhononDistribution({0.5, -1e-6, 0.5}), InvariantViolation);
    CHECK_THROWS_AS(PhononDistribution({0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(PhononDistribution({1.0}), DomainError);
    CHECK_THROWS_AS(PhononDistribution({std::nan(""), 1.0}), DomainError);

    const auto grown = d.resized(5);
    CHECK(grown.size() == 6);
    CHECK(grown[5] == 0.0);
    CHECK_THROWS_AS(d.resized(1), TruncationOverflow);
}

TEST_CASE("apply_kick examples")
{
    SUBCASE("one phonon fully absorbed")
    {
        const auto out = apply_kick(PhononDistribution::fock(1, 10), build_kick_map_for_area(pi / 2, 0.0, 10));
        CHECK(out[0] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(out[1] < 1e-30);
    }
    SUBCASE("vacuum is dark for a ground-state qubit")
    {
        for (double theta : {0.3, pi / 8, pi / 2, 2.0}) {
            const auto out = apply_kick(PhononDistribution::vacuum(10), build_kick_map_for_area(theta, 0.0, 10));
            CHECK(out[0] == 1.0);
        }
    }
    SUBCASE("excited qubit deposits one phonon into vacuum")
    {
        const auto out = apply_kick(PhononDistribution::vacuum(10), build_kick_map_for_area(pi / 2, 1.0, 10));
        CHECK(out[1] == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("size mismatch")
    {
        CHECK_THROWS_AS(apply_kick(PhononDistribution::vacuum(10), build_kick_map_for_area(1.0, 0.0, 11)),
                        SizeMismatch);
    }
    SUBCASE("maser branch reports mass pushed into the top level")
    {
        Diagnostics diag;
        apply_kick(PhononDistribution::fock(4, 5), build_kick_map_for_area(pi / 2, 1.0, 5), &diag);
        CHECK(diag.has(WarningCode::truncation_overflow));
    }
}

TEST_CASE("mean phonon number")
{
    CHECK(mean_phonon(PhononDistribution::vacuum(5)) == 0.0);
    CHECK(mean_phonon(PhononDistribution::fock(3, 5)) == 3.0);
    for (double n_th : {0.1, 1.0, 1.7, 7.5}) {
        const auto d = thermal_distribution_auto(n_th);
        CHECK(mean_phonon(d) == doctest::Approx(n_th).epsilon(1e-6));
    }
}

TEST_CASE("thermal distribution")
{
    const auto cold = thermal_distribution(0.0, 30);
    CHECK(cold[0] == 1.0);
    CHECK(mean_phonon(cold) == 0.0);

    const auto one = thermal_distribution(1.0, 80);
    CHECK(one[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(one[3] == doctest::Approx(1.0 / 16.0).epsilon(1e-12));

    CHECK(mean_phonon(thermal_distribution(1.7, 60)) == doctest::Approx(1.7).epsilon(1e-6));

    Diagnostics diag;
    thermal_distribution(10.0, 20, &diag);
    CHECK(diag.has(WarningCode::truncation_overflow));

    const auto hot = thermal_distribution_auto(100.0);
    CHECK(hot.tail_ok());
    CHECK(hot.n_max() > default_n_max(100.0));
}

TEST_CASE("truncation policy")
{
    CHECK(default_n_max(0.0) == 60);
    CHECK(default_n_max(1.7) == 60);
    CHECK(default_n_max(10.0) == 140);
    CHECK(default_n_max(100.0) == 1220);
    CHECK(grown_n_max(60) == 90);
}

TEST_CASE("protocol parameter checks")
{
    auto p = ProtocolParams::from_ratios(2 * pi * 1e7, pi / 2, pi * 1e3, 100.0, 1.0);
    CHECK_NOTHROW(p.validate());
    CHECK(p.ra_over_kappa() == doctest::Approx(100.0));
    Diagnostics ok;
    p.check_coarse_graining(&ok);
    CHECK(ok.warnings.empty());

    auto bad = p;
    bad.p_e = 1.2;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = p;
    bad.n_th = -1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = p;
    bad.r_a = 0.0;
    bad.kappa = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);

    auto slow = p;
    slow.tau = 1e-3;
    slow.r_a = 1e3;
    Diagnostics diag;
    slow.check_coarse_graining(&diag);
    CHECK(diag.warnings.size() == 2);
}

TEST_CASE("property: kicks conserve probability")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = testing::random_distribution(rng, 40);
        const auto k = build_kick_map_for_area(2.0 * pi * u(rng), u(rng), 40);
        Diagnostics diag;
        const auto out = apply_kick(d, k, &diag);
        CHECK_FALSE(diag.has(WarningCode::renormalized));
        const double sum = std::accumulate(out.values().begin(), out.values().end(), 0.0);
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("property: a ground-state qubit never heats")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 4.0 * pi);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = testing::random_distribution(rng, 50);
        const auto out = apply_kick(d, build_kick_map_for_area(u(rng), 0.0, 50));
        CHECK(mean_phonon(out) <= mean_phonon(d) + 1e-12);
    }
}

TEST_CASE("property: zero pulse area is the identity")
{
    std::mt19937_64 rng(13);
    for (double p_e : {0.0, 0.4, 1.0}) {
        const auto d = testing::random_distribution(rng, 30);
        const auto out = apply_kick(d, build_kick_map_for_area(0.0, p_e, 30));
        CHECK(testing::max_abs_diff(d, out) == 0.0);
    }
}

TEST_CASE("property: no positive pulse area below 4 pi is the identity")
{
    // sqrt(n+1) spacing means the levels never rephase simultaneously.
    double worst = 1.0;
    for (int i = 0; i < 40000; ++i) {
        const double theta = 0.1 + (4.0 * pi - 0.1) * i / 40000.0;
        const auto k = build_kick_map_for_area(theta, 0.0, 30);
        worst = std::min(worst, *std::max_element(k.ce2.begin(), k.ce2.end()));
    }
    CHECK(worst > 0.1);
    for (double theta : {1e-6, 1e-3, 0.05}) {
        CHECK(build_kick_map_for_area(theta, 0.0, 30).ce2[29] > 0.0);
    }

    const auto k = build_kick_map_for_area(pi, 0.0, 30);
    CHECK(k.ce2[0] < 1e-30);
    CHECK(k.ce2[1] > 0.1);
}
