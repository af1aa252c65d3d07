#include "product_form.hpp"

#include <cmath>
#include <string>

namespace phononcool::detail {

namespace {
constexpr std::size_t max_levels = 500000;
constexpr double rescale_above = 1e200;
} // namespace

double product_ratio(double n_th, double kappa, double r_a, double p, double coupling, double level)
{
    const double num = kappa * n_th * level + p * coupling * r_a;
    const double den = kappa * (n_th + 1.0) * level + (1.0 - p) * coupling * r_a;
    if (den == 0.0) {
        if (num == 0.0) {
            throw DegenerateKernel("level " + std::to_string(static_cast<long>(level)) +
                                   " is decoupled: steady state is not unique");
        }
        throw NonNormalizable("level " + std::to_string(static_cast<long>(level)) + " has no downward rate");
    }
    return num / den;
}

PhononDistribution solve_product_form(double n_th, double kappa, double r_a, double p,
                                      const std::function<std::vector<double>(std::size_t)>& coupling,
                                      std::size_t n_max, double tail_tol)
{
    for (std::size_t n = n_max; n <= max_levels; n = grown_n_max(n)) {
        const auto c = coupling(n);
        std::vector<double> w(n + 1);
        w[0] = 1.0;
        for (std::size_t l = 1; l <= n; ++l) {
            w[l] = w[l - 1] * product_ratio(n_th, kappa, r_a, p, c[l - 1], static_cast<double>(l));
            if (w[l] > rescale_above) {
                for (std::size_t k = 0; k <= l; ++k) {
                    w[k] /= rescale_above;
                }
            }
        }
        PhononDistribution dist(std::move(w));
        if (dist.tail_ok(tail_tol)) {
            return dist;
        }
    }
    throw NonNormalizable("product-form steady state does not decay within " + std::to_string(max_levels) +
                          " levels");
}

} // namespace phononcool::detail
