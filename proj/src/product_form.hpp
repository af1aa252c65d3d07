// product_form.hpp - detailed-balance steady state shared by dynamics and corrections

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "phononcool/model.hpp"

namespace phononcool::detail {

// Ratio p_l / p_{l-1} for the birth-death chain with kick coupling c = ce2[l-1] (times any
// fidelity factor) and excited preparation probability p. Written with kappa multiplied
// through so that kappa = 0 is well defined.
double product_ratio(double n_th, double kappa, double r_a, double p, double coupling, double level);

// coupling(n_max) returns the n_max effective couplings for l = 1..n_max. The
// truncation grows from n_max until the top population is below tail_tol.
PhononDistribution solve_product_form(double n_th, double kappa, double r_a, double p,
                                      const std::function<std::vector<double>(std::size_t)>& coupling,
                                      std::size_t n_max, double tail_tol);

} // namespace phononcool::detail
