// test_support.hpp - random generators shared by the test suites

#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "phononcool/model.hpp"

namespace phononcool::testing {

// Random normalized distribution with a mix of dense and sparse supports.
inline PhononDistribution random_distribution(std::mt19937_64& rng, std::size_t n_max)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> p(n_max + 1);
    const bool sparse = u(rng) < 0.3;
    for (auto& x : p) {
        x = sparse ? (u(rng) < 0.2 ? u(rng) : 0.0) : -std::log(u(rng) + 1e-300);
    }
    p[static_cast<std::size_t>(u(rng) * static_cast<double>(n_max))] += 0.5;
    return PhononDistribution(std::move(p));
}

// Log-uniform sample in [lo, hi].
inline double log_uniform(std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

inline double max_abs_diff(const PhononDistribution& a, const PhononDistribution& b)
{
    double d = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        d = std::max(d, std::abs(a[n] - b[n]));
    }
    return d;
}

} // namespace phononcool::testing
