#include "phononcool/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "product_form.hpp"
#include "propagate.hpp"

namespace phononcool {

namespace {

constexpr double kernel_rate_tol = 1e-8;
constexpr std::size_t dense_exponential_limit = 256;

void check_sample_times(std::span<const double> samples, double t_end)
{
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i] < 0.0 || samples[i] > t_end) {
            throw DomainError("sample time outside [0, t_end]");
        }
        if (i > 0 && !(samples[i] > samples[i - 1])) {
            throw DomainError("sample times must be strictly increasing");
        }
    }
}

void check_tail(const PhononDistribution& d, double tail_tol, double t)
{
    if (!d.tail_ok(tail_tol)) {
        throw TruncationOverflow("top-level population " + std::to_string(d.tail_mass()) + " at t = " +
                                 std::to_string(t) + " s exceeds the tail tolerance");
    }
}

SteadyStateResult make_result(PhononDistribution pops, const KickMap& kick, SteadyStateMethod method)
{
    const auto k = kick.n_max() == pops.n_max() ? kick : kick.resized(pops.n_max());
    const double mean = mean_phonon(pops);
    const double dn = kick_fluctuation(pops, k);
    const double p0 = pops[0];
    return {std::move(pops), mean, dn, p0, method};
}

} // namespace

void GeneratorMatrix::apply(std::span<const double> p, std::span<double> out) const
{
    const std::size_t n = diag.size();
    if (p.size() != n || out.size() != n) {
        throw SizeMismatch("generator applied to a vector of the wrong size");
    }
    for (std::size_t i = 0; i < n; ++i) {
        double v = diag[i] * p[i];
        if (i > 0) {
            v += lower[i - 1] * p[i - 1];
        }
        if (i + 1 < n) {
            v += upper[i] * p[i + 1];
        }
        out[i] = v;
    }
}

std::vector<double> GeneratorMatrix::apply(std::span<const double> p) const
{
    std::vector<double> out(p.size());
    apply(p, out);
    return out;
}

Eigen::MatrixXd GeneratorMatrix::to_dense() const
{
    const auto n = static_cast<Eigen::Index>(diag.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = diag[static_cast<std::size_t>(i)];
        if (i + 1 < n) {
            m(i, i + 1) = upper[static_cast<std::size_t>(i)];
            m(i + 1, i) = lower[static_cast<std::size_t>(i)];
        }
    }
    return m;
}

double GeneratorMatrix::spectral_bound() const
{
    double rho = 0.0;
    for (double d : diag) {
        rho = std::max(rho, 2.0 * std::abs(d));
    }
    return rho;
}

double GeneratorMatrix::rate_scale() const { return params.kappa > 0.0 ? params.kappa : params.r_a; }

GeneratorMatrix build_damping_generator(double kappa, double n_th, std::size_t n_max)
{
    if (!(kappa >= 0.0) || !(n_th >= 0.0)) {
        throw DomainError("damping needs kappa >= 0 and n_th >= 0");
    }
    if (n_max < 1) {
        throw DomainError("generator needs n_max >= 1");
    }
    GeneratorMatrix g;
    g.diag.assign(n_max + 1, 0.0);
    g.upper.resize(n_max);
    g.lower.resize(n_max);
    for (std::size_t n = 0; n < n_max; ++n) {
        const double level = static_cast<double>(n + 1);
        g.upper[n] = kappa * (n_th + 1.0) * level;
        g.lower[n] = kappa * n_th * level;
    }
    for (std::size_t n = 0; n <= n_max; ++n) {
        double out = 0.0;
        if (n < n_max) {
            out += g.lower[n];
        }
        if (n > 0) {
            out += g.upper[n - 1];
        }
        g.diag[n] = -out;
    }
    g.params.kappa = kappa;
    g.params.n_th = n_th;
    g.kick = build_kick_map_for_area(0.0, 0.0, n_max);
    return g;
}

GeneratorMatrix build_generator(const ProtocolParams& params, const KickMap& kick, std::size_t n_max)
{
    params.validate();
    if (kick.n_max() != n_max) {
        throw SizeMismatch("kick map sized for n_max = " + std::to_string(kick.n_max()) + ", generator for " +
                           std::to_string(n_max));
    }
    GeneratorMatrix g = build_damping_generator(params.kappa, params.n_th, n_max);
    const double down = params.r_a * (1.0 - kick.p_e);
    const double up = params.r_a * kick.p_e;
    for (std::size_t n = 0; n < n_max; ++n) {
        g.upper[n] += down * kick.ce2[n];
        g.lower[n] += up * kick.ce2[n];
    }
    for (std::size_t n = 0; n <= n_max; ++n) {
        double out = 0.0;
        if (n < n_max) {
            out += g.lower[n];
        }
        if (n > 0) {
            out += g.upper[n - 1];
        }
        g.diag[n] = -out;
    }
    g.params = params;
    g.kick = kick;
    return g;
}

EvolutionTrace evolve(const PhononDistribution& initial, const GeneratorMatrix& gen, double t_end,
                      std::span<const double> sample_times, const EvolveOptions& options)
{
    if (!(t_end > 0.0)) {
        throw DomainError("t_end must be positive");
    }
    if (initial.size() != gen.size()) {
        throw SizeMismatch("initial distribution and generator sizes differ");
    }
    check_sample_times(sample_times, t_end);

    const Integrator kind = options.integrator == Integrator::automatic
                                ? detail::choose_integrator(gen, t_end)
                                : options.integrator;
    detail::Stepper stepper(gen, kind, options.rtol, options.atol, options.max_steps);

    EvolutionTrace trace;
    std::vector<double> y = initial.values();
    double t = 0.0;
    for (double ts : sample_times) {
        stepper.advance(y, ts - t);
        t = ts;
        PhononDistribution d(y);
        check_tail(d, options.tail_tol, t);
        trace.times.push_back(t);
        trace.mean_n.push_back(mean_phonon(d));
        trace.p0.push_back(d[0]);
        if (options.keep_snapshots) {
            trace.snapshots.push_back(d);
        }
        y = d.values();
    }
    return trace;
}

StroboscopicTrace evolve_stroboscopic(const PhononDistribution& initial, const ProtocolParams& params,
                                      const KickMap& kick, std::size_t n_kicks, const EvolveOptions& options)
{
    params.validate();
    if (!(params.r_a > 0.0)) {
        throw DomainError("stroboscopic evolution needs a positive kick rate");
    }
    if (kick.n_max() != initial.n_max()) {
        throw SizeMismatch("kick map and distribution truncations differ");
    }
    StroboscopicTrace trace{{}, {}, {}, {}, {}, initial};
    if (n_kicks == 0) {
        return trace;
    }
    const std::size_t n_max = initial.n_max();
    const double period = 1.0 / params.r_a;
    const GeneratorMatrix damping = build_damping_generator(params.kappa, params.n_th, n_max);

    // Free damping over one period: exact dense exponential for small
    // truncations, adaptive rational stepping otherwise.
    Eigen::MatrixXd propagator;
    const bool dense = n_max + 1 <= dense_exponential_limit;
    if (dense) {
        propagator = (damping.to_dense() * period).exp();
    }
    detail::Stepper stepper(damping, Integrator::rational, options.rtol, options.atol, options.max_steps);

    PhononDistribution state = initial;
    for (std::size_t k = 1; k <= n_kicks; ++k) {
        std::vector<double> y = state.values();
        if (params.kappa > 0.0) {
            if (dense) {
                const Eigen::Map<const Eigen::VectorXd> v(y.data(), static_cast<Eigen::Index>(y.size()));
                const Eigen::VectorXd w = propagator * v;
                y.assign(w.data(), w.data() + w.size());
            }
            else {
                stepper.advance(y, period);
            }
        }
        PhononDistribution before(std::move(y));
        check_tail(before, options.tail_tol, static_cast<double>(k) * period);
        PhononDistribution after = apply_kick(before, kick);
        trace.kick_times.push_back(static_cast<double>(k) * period);
        trace.mean_before.push_back(mean_phonon(before));
        trace.mean_after.push_back(mean_phonon(after));
        trace.p0_before.push_back(before[0]);
        trace.p0_after.push_back(after[0]);
        state = std::move(after);
    }
    trace.final_state = std::move(state);
    return trace;
}

SteadyStateResult steady_state_analytic(const ProtocolParams& params, const KickMap& kick, std::size_t n_max,
                                        double tail_tol)
{
    params.validate();
    auto coupling = [&kick](std::size_t n) {
        const auto k = kick.n_max() == n ? kick : kick.resized(n);
        return std::vector<double>(k.ce2.begin(), k.ce2.end() - 1);
    };
    auto pops = detail::solve_product_form(params.n_th, params.kappa, params.r_a, kick.p_e, coupling, n_max,
                                           tail_tol);
    return make_result(std::move(pops), kick, SteadyStateMethod::analytic_product);
}

SteadyStateResult steady_state_numeric(const GeneratorMatrix& gen, Diagnostics* diag)
{
    const std::size_t n_max = gen.n_max();
    double scale = 0.0;
    for (double d : gen.diag) {
        scale = std::max(scale, std::abs(d));
    }
    if (scale == 0.0) {
        throw DegenerateKernel("generator is identically zero");
    }
    const double cut = kernel_rate_tol * scale;
    auto down = [&](std::size_t n) { return gen.upper[n] > cut; };  // n+1 -> n
    auto up = [&](std::size_t n) { return gen.lower[n] > cut; };    // n -> n+1

    // Communicating classes of a birth-death chain are runs of levels linked
    // in both directions. A class [a, b] is closed when it cannot step below
    // a or above b.
    std::size_t closed = 0;
    std::size_t lo = 0;
    std::size_t hi = 0;
    for (std::size_t a = 0; a <= n_max;) {
        std::size_t b = a;
        while (b < n_max && up(b) && down(b)) {
            ++b;
        }
        const bool leaks_down = a > 0 && down(a - 1);
        const bool leaks_up = b < n_max && up(b);
        if (!leaks_down && !leaks_up) {
            ++closed;
            lo = a;
            hi = b;
        }
        a = b + 1;
    }
    if (closed != 1) {
        throw DegenerateKernel("generator has " + std::to_string(closed) + " closed classes; kernel is degenerate");
    }

    // Pin p_lo = 1 and eliminate the balance equations of rows lo+1..hi.
    std::vector<double> p(n_max + 1, 0.0);
    p[lo] = 1.0;
    if (hi > lo) {
        const std::size_t m = hi - lo;
        std::vector<double> cp(m);
        std::vector<double> rhs(m);
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t row = lo + 1 + j;
            const double sub = gen.lower[row - 1];
            const double sup = row < hi ? gen.upper[row] : 0.0;
            const double b0 = j == 0 ? -sub * p[lo] : 0.0;
            const double denom = gen.diag[row] - (j == 0 ? 0.0 : sub * cp[j - 1]);
            cp[j] = sup / denom;
            rhs[j] = (b0 - (j == 0 ? 0.0 : sub * rhs[j - 1])) / denom;
        }
        for (std::size_t j = m; j-- > 0;) {
            const double next = j + 1 < m ? p[lo + 2 + j] : 0.0;
            p[lo + 1 + j] = rhs[j] - cp[j] * next;
        }
    }
    for (auto& x : p) {
        if (x < 0.0 && x > -1e-12) {
            x = 0.0;
        }
    }
    PhononDistribution pops(std::move(p));
    if (!pops.tail_ok()) {
        warn(diag, WarningCode::truncation_overflow,
             "steady state has top-level population " + std::to_string(pops.tail_mass()));
    }
    return make_result(std::move(pops), gen.kick, SteadyStateMethod::null_space);
}

SteadyStateResult steady_state_long_time(const GeneratorMatrix& gen, const LongTimeOptions& options,
                                         std::optional<PhononDistribution> initial)
{
    PhononDistribution start = initial ? *initial : thermal_distribution(gen.params.n_th, gen.n_max());
    if (start.size() != gen.size()) {
        throw SizeMismatch("initial distribution and generator sizes differ");
    }
    const double scale = gen.rate_scale();
    if (!(scale > 0.0)) {
        throw DomainError("long-time steady state needs a positive rate scale");
    }
    detail::Stepper stepper(gen, Integrator::rational, options.rtol, options.atol, 10'000'000);
    std::vector<double> y = start.values();
    std::vector<double> rate(y.size());
    double chunk = 1.0 / scale;
    for (std::size_t i = 0; i < options.max_chunks; ++i) {
        stepper.advance(y, chunk);
        y = PhononDistribution(y).values();
        gen.apply(y, rate);
        double residual = 0.0;
        for (double r : rate) {
            residual = std::max(residual, std::abs(r));
        }
        if (residual < options.residual_tol * scale) {
            return make_result(PhononDistribution(std::move(y)), gen.kick, SteadyStateMethod::long_time);
        }
        chunk *= 2.0;
    }
    throw StepFailure("long-time evolution did not settle");
}

double kick_fluctuation(const PhononDistribution& dist, const KickMap& kick)
{
    return mean_phonon(dist) - mean_phonon(apply_kick(dist, kick));
}

} // namespace phononcool
