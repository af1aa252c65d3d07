// propagate.hpp - adaptive integrators for dP/dt = G P with tridiagonal G

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "phononcool/dynamics.hpp"

namespace phononcool::detail {

// Picks the rational stepper when an explicit method would need more than
// ~2e4 stability-limited steps over the horizon.
Integrator choose_integrator(const GeneratorMatrix& gen, double horizon);

// Solves (h G - z I) x = b in place for tridiagonal G (Thomas algorithm).
// For z with Re z >= 0 the matrix is column diagonally dominant.
template <typename Scalar>
void solve_shifted(const GeneratorMatrix& gen, double h, Scalar z, std::vector<Scalar>& b);

class Stepper {
public:
    Stepper(const GeneratorMatrix& gen, Integrator kind, double rtol, double atol, std::size_t max_steps);

    // Integrates y over an interval of length dt with error control.
    void advance(std::vector<double>& y, double dt);

    std::size_t steps_taken() const { return steps_; }
    Integrator kind() const { return kind_; }

private:
    double dp5_step(const std::vector<double>& y, double h, std::vector<double>& y_new);
    double rational_step(const std::vector<double>& y, double h, std::vector<double>& y_new);
    void rational_map(const std::vector<double>& y, double h, std::vector<double>& out);
    double error_norm(const std::vector<double>& err, const std::vector<double>& y0,
                      const std::vector<double>& y1) const;

    const GeneratorMatrix& gen_;
    Integrator kind_;
    double rtol_;
    double atol_;
    std::size_t max_steps_;
    std::size_t steps_ = 0;
    double h_ = 0.0;
    std::vector<std::vector<double>> k_;
    std::vector<double> tmp_;
    std::vector<double> err_;
};

} // namespace phononcool::detail
