#include "propagate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace phononcool::detail {

namespace {

// Subdiagonal (2,3) Pade approximant of exp(z) (the Radau IIA stability function):
//   R(z) = (1 + 2z/5 + z^2/20) / (1 - 3z/5 + 3z^2/20 - z^3/60),
// evaluated as sum_i r_i / (z - z_i) over the poles z_i.
struct RationalCoefficients {
    double real_pole;
    double real_residue;
    std::complex<double> pole;
    std::complex<double> residue;
};

RationalCoefficients make_rational_coefficients()
{
    // Poles are the roots of z^3 - 9 z^2 + 36 z - 60.
    auto q = [](std::complex<double> z) { return ((z - 9.0) * z + 36.0) * z - 60.0; };
    auto dq = [](std::complex<double> z) { return (3.0 * z - 18.0) * z + 36.0; };
    double x = 3.6;
    for (int i = 0; i < 50; ++i) {
        x -= q(x).real() / dq(x).real();
    }
    // Deflate: z^2 + b z + c with b = x - 9, c = 60 / x.
    const double b = x - 9.0;
    const double c = 60.0 / x;
    std::complex<double> zc(-b / 2.0, std::sqrt(c - b * b / 4.0));
    for (int i = 0; i < 5; ++i) {
        zc -= q(zc) / dq(zc);
    }
    auto p = [](std::complex<double> z) { return 1.0 + z * (2.0 / 5.0 + z / 20.0); };
    // R = P / Q with Q = -(z^3 - 9z^2 + 36z - 60)/60, so Q' = -dq/60.
    auto residue = [&](std::complex<double> z) { return p(z) / (-dq(z) / 60.0); };
    return {x, residue(x).real(), zc, residue(zc)};
}

const RationalCoefficients& rational_coefficients()
{
    static const RationalCoefficients rc = make_rational_coefficients();
    return rc;
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr std::array<double, 2> a3{3.0 / 40.0, 9.0 / 40.0};
constexpr std::array<double, 3> a4{44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0};
constexpr std::array<double, 4> a5{19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0};
constexpr std::array<double, 5> a6{9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
                                   -5103.0 / 18656.0};
constexpr std::array<double, 6> b5{35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0};
constexpr std::array<double, 7> e5{71.0 / 57600.0,    0.0,          -71.0 / 16695.0, 71.0 / 1920.0,
                                   -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0};

constexpr double dp5_stability = 3.3;
constexpr double explicit_step_budget = 2e4;

} // namespace

Integrator choose_integrator(const GeneratorMatrix& gen, double horizon)
{
    const double steps = gen.spectral_bound() * horizon / dp5_stability;
    return steps > explicit_step_budget ? Integrator::rational : Integrator::explicit_rk;
}

template <typename Scalar>
void solve_shifted(const GeneratorMatrix& gen, double h, Scalar z, std::vector<Scalar>& b)
{
    const std::size_t n = gen.size();
    std::vector<Scalar> cp(n);
    Scalar denom = h * gen.diag[0] - z;
    cp[0] = n > 1 ? h * gen.upper[0] / denom : Scalar(0);
    b[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        const double sub = h * gen.lower[i - 1];
        denom = (h * gen.diag[i] - z) - sub * cp[i - 1];
        cp[i] = i + 1 < n ? h * gen.upper[i] / denom : Scalar(0);
        b[i] = (b[i] - sub * b[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        b[i] -= cp[i] * b[i + 1];
    }
}

template void solve_shifted<double>(const GeneratorMatrix&, double, double, std::vector<double>&);
template void solve_shifted<std::complex<double>>(const GeneratorMatrix&, double, std::complex<double>,
                                                  std::vector<std::complex<double>>&);

Stepper::Stepper(const GeneratorMatrix& gen, Integrator kind, double rtol, double atol, std::size_t max_steps)
    : gen_(gen), kind_(kind), rtol_(rtol), atol_(atol), max_steps_(max_steps)
{
    if (kind_ == Integrator::automatic) {
        kind_ = Integrator::explicit_rk;
    }
    const std::size_t n = gen.size();
    k_.assign(7, std::vector<double>(n));
    tmp_.resize(n);
    err_.resize(n);
}

double Stepper::error_norm(const std::vector<double>& err, const std::vector<double>& y0,
                           const std::vector<double>& y1) const
{
    double e = 0.0;
    for (std::size_t i = 0; i < err.size(); ++i) {
        const double scale = atol_ + rtol_ * std::max(std::abs(y0[i]), std::abs(y1[i]));
        e = std::max(e, std::abs(err[i]) / scale);
    }
    return e;
}

double Stepper::dp5_step(const std::vector<double>& y, double h, std::vector<double>& y_new)
{
    const std::size_t n = y.size();
    auto& k = k_;
    gen_.apply(y, k[0]);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * a21 * k[0][i];
    gen_.apply(tmp_, k[1]);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a3[0] * k[0][i] + a3[1] * k[1][i]);
    gen_.apply(tmp_, k[2]);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a4[0] * k[0][i] + a4[1] * k[1][i] + a4[2] * k[2][i]);
    gen_.apply(tmp_, k[3]);
    for (std::size_t i = 0; i < n; ++i)
        tmp_[i] = y[i] + h * (a5[0] * k[0][i] + a5[1] * k[1][i] + a5[2] * k[2][i] + a5[3] * k[3][i]);
    gen_.apply(tmp_, k[4]);
    for (std::size_t i = 0; i < n; ++i)
        tmp_[i] = y[i] + h * (a6[0] * k[0][i] + a6[1] * k[1][i] + a6[2] * k[2][i] + a6[3] * k[3][i] +
                              a6[4] * k[4][i]);
    gen_.apply(tmp_, k[5]);
    for (std::size_t i = 0; i < n; ++i)
        y_new[i] = y[i] + h * (b5[0] * k[0][i] + b5[2] * k[2][i] + b5[3] * k[3][i] + b5[4] * k[4][i] +
                               b5[5] * k[5][i]);
    gen_.apply(y_new, k[6]);
    for (std::size_t i = 0; i < n; ++i)
        err_[i] = h * (e5[0] * k[0][i] + e5[2] * k[2][i] + e5[3] * k[3][i] + e5[4] * k[4][i] + e5[5] * k[5][i] +
                       e5[6] * k[6][i]);
    return error_norm(err_, y, y_new);
}

void Stepper::rational_map(const std::vector<double>& y, double h, std::vector<double>& out)
{
    const auto& rc = rational_coefficients();
    std::vector<double> real_part(y);
    solve_shifted(gen_, h, rc.real_pole, real_part);
    std::vector<std::complex<double>> cplx(y.begin(), y.end());
    solve_shifted(gen_, h, rc.pole, cplx);
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = rc.real_residue * real_part[i] + 2.0 * (rc.residue * cplx[i]).real();
    }
}

double Stepper::rational_step(const std::vector<double>& y, double h, std::vector<double>& y_new)
{
    // Step doubling: the method is order 5, so the two-half-step result
    // carries error ~ |y_half - y_full| / 31.
    rational_map(y, h, tmp_);
    std::vector<double> half(y.size());
    rational_map(y, 0.5 * h, half);
    rational_map(half, 0.5 * h, y_new);
    for (std::size_t i = 0; i < y.size(); ++i) {
        err_[i] = (y_new[i] - tmp_[i]) / 31.0;
    }
    return error_norm(err_, y, y_new);
}

void Stepper::advance(std::vector<double>& y, double dt)
{
    if (!(dt > 0.0)) {
        return;
    }
    const bool explicit_rk = kind_ == Integrator::explicit_rk;
    const double order = explicit_rk ? 5.0 : 6.0;
    if (h_ <= 0.0) {
        const double rho = gen_.spectral_bound();
        h_ = rho > 0.0 ? std::min(dt, (explicit_rk ? 0.5 : 1.0) / rho) : dt;
    }
    std::vector<double> y_new(y.size());
    double t = 0.0;
    while (t < dt) {
        // Absorb rounding-sized remainders into the final step.
        const bool last = h_ >= (dt - t) * (1.0 - 1e-12);
        const double h = last ? dt - t : h_;
        if (!last && h <= 1e-15 * dt) {
            throw StepFailure("integrator step size underflow");
        }
        if (++steps_ > max_steps_) {
            throw StepFailure("integrator exceeded " + std::to_string(max_steps_) + " steps");
        }
        const double err = explicit_rk ? dp5_step(y, h, y_new) : rational_step(y, h, y_new);
        if (!std::isfinite(err)) {
            throw StepFailure("integrator produced a non-finite state");
        }
        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -1.0 / order), 0.2, 5.0);
        if (err <= 1.0) {
            y.swap(y_new);
            t = last ? dt : t + h;
            if (!last || factor < 1.0) {
                h_ = h * factor;
            }
        }
        else {
            h_ = h * factor;
        }
    }
}

} // namespace phononcool::detail
