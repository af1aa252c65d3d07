#include "phononcool/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace phononcool {

namespace {

constexpr double clamp_tol = 1e-12;
constexpr double drift_tol = 1e-12;
constexpr std::size_t max_truncation = 200000;

std::string fmt_double(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

} // namespace

PhononDistribution::PhononDistribution(std::vector<double> populations) : p_(std::move(populations))
{
    if (p_.size() < 2) {
        throw DomainError("phonon distribution needs at least two levels");
    }
    double sum = 0.0;
    for (auto& x : p_) {
        if (std::isnan(x)) {
            throw DomainError("phonon distribution contains NaN");
        }
        if (x < 0.0) {
            if (x < -clamp_tol) {
                throw InvariantViolation("negative population " + fmt_double(x));
            }
            x = 0.0;
        }
        sum += x;
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        throw DomainError("phonon distribution has no finite mass");
    }
    if (std::abs(sum - 1.0) > drift_tol) {
        for (auto& x : p_) {
            x /= sum;
        }
    }
}

PhononDistribution PhononDistribution::vacuum(std::size_t n_max) { return fock(0, n_max); }

PhononDistribution PhononDistribution::fock(std::size_t n, std::size_t n_max)
{
    if (n > n_max) {
        throw DomainError("Fock level above truncation");
    }
    std::vector<double> p(n_max + 1, 0.0);
    p[n] = 1.0;
    return PhononDistribution(std::move(p));
}

PhononDistribution PhononDistribution::resized(std::size_t n_max, double tail_tol) const
{
    std::vector<double> p(n_max + 1, 0.0);
    const auto keep = std::min(p.size(), p_.size());
    std::copy_n(p_.begin(), keep, p.begin());
    const double dropped = std::accumulate(p_.begin() + static_cast<std::ptrdiff_t>(keep), p_.end(), 0.0);
    if (dropped > tail_tol) {
        throw TruncationOverflow("shrinking truncation discards mass " + fmt_double(dropped));
    }
    return PhononDistribution(std::move(p));
}

KickMap KickMap::resized(std::size_t n_max) const { return build_kick_map_for_area(theta, p_e, n_max); }

ProtocolParams ProtocolParams::from_ratios(double g, double pulse_area, double kappa, double ra_over_kappa,
                                           double n_th, double p_e)
{
    ProtocolParams p;
    p.g = g;
    p.tau = pulse_area / g;
    p.kappa = kappa;
    p.r_a = ra_over_kappa * kappa;
    p.n_th = n_th;
    p.p_e = p_e;
    return p;
}

void ProtocolParams::validate() const
{
    if (!(g > 0.0) || !(tau > 0.0)) {
        throw DomainError("coupling g and kick duration tau must be positive");
    }
    if (!(r_a >= 0.0) || !(kappa >= 0.0) || (r_a == 0.0 && kappa == 0.0)) {
        throw DomainError("kick rate and decay rate must be non-negative and not both zero");
    }
    if (!std::isfinite(r_a) || !std::isfinite(kappa)) {
        throw DomainError("kick rate and decay rate must be finite");
    }
    if (!(n_th >= 0.0) || !std::isfinite(n_th)) {
        throw DomainError("thermal phonon number must be finite and non-negative");
    }
    if (!(p_e >= 0.0 && p_e <= 1.0)) {
        throw DomainError("excited-state preparation probability must lie in [0, 1]");
    }
}

void ProtocolParams::check_coarse_graining(Diagnostics* diag) const
{
    if (r_a * tau > 0.5) {
        warn(diag, WarningCode::coarse_graining, "r_a*tau = " + fmt_double(r_a * tau) + " > 0.5: kicks are not short");
    }
    if (kappa * tau > 0.01) {
        warn(diag, WarningCode::coarse_graining, "kappa*tau = " + fmt_double(kappa * tau) + " > 0.01");
    }
}

std::size_t default_n_max(double n_th)
{
    const double n = std::ceil(20.0 + 12.0 * n_th);
    return std::max<std::size_t>(60, static_cast<std::size_t>(n));
}

std::size_t grown_n_max(std::size_t n_max) { return n_max + (n_max + 1) / 2; }

KickMap build_kick_map(double g, double tau, double p_e, std::size_t n_max)
{
    if (!(g > 0.0) || !(tau > 0.0)) {
        throw DomainError("kick map needs positive g and tau");
    }
    return build_kick_map_for_area(g * tau, p_e, n_max);
}

KickMap build_kick_map_for_area(double theta, double p_e, std::size_t n_max)
{
    if (!(theta >= 0.0) || !std::isfinite(theta)) {
        throw DomainError("pulse area must be finite and non-negative");
    }
    if (!(p_e >= 0.0 && p_e <= 1.0)) {
        throw DomainError("p_e must lie in [0, 1]");
    }
    if (n_max < 1) {
        throw DomainError("kick map needs n_max >= 1");
    }
    KickMap k;
    k.p_e = p_e;
    k.theta = theta;
    k.ce2.resize(n_max + 1);
    k.cg2.resize(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        const double s = std::sin(theta * std::sqrt(static_cast<double>(n + 1)));
        const double c = std::cos(theta * std::sqrt(static_cast<double>(n)));
        k.ce2[n] = s * s;
        k.cg2[n] = c * c;
    }
    return k;
}

PhononDistribution apply_kick(const PhononDistribution& dist, const KickMap& kick, Diagnostics* diag)
{
    if (kick.ce2.size() != dist.size() || kick.cg2.size() != dist.size()) {
        throw SizeMismatch("kick map sized for " + std::to_string(kick.ce2.size()) + " levels, distribution has " +
                           std::to_string(dist.size()));
    }
    const auto& p = dist.values();
    const auto& ce2 = kick.ce2;
    const auto& cg2 = kick.cg2;
    const std::size_t top = dist.n_max();
    const double pg = 1.0 - kick.p_e;
    const double pe = kick.p_e;

    std::vector<double> out(p.size(), 0.0);
    for (std::size_t n = 0; n <= top; ++n) {
        double ground = cg2[n] * p[n];
        if (n < top) {
            ground += ce2[n] * p[n + 1];
        }
        double excited = (n < top ? cg2[n + 1] : 1.0) * p[n];
        if (n > 0) {
            excited += ce2[n - 1] * p[n - 1];
        }
        out[n] = pg * ground + pe * excited;
    }

    const double before = std::accumulate(p.begin(), p.end(), 0.0);
    const double after = std::accumulate(out.begin(), out.end(), 0.0);
    if (std::abs(after - before) > drift_tol) {
        warn(diag, WarningCode::renormalized, "kick drifted total probability by " + fmt_double(after - before));
    }
    PhononDistribution result(std::move(out));
    if (pe > 0.0 && !result.tail_ok()) {
        warn(diag, WarningCode::truncation_overflow,
             "excited-qubit kicks pushed mass " + fmt_double(result.tail_mass()) + " into the top level");
    }
    return result;
}

double mean_phonon(const PhononDistribution& dist)
{
    double m = 0.0;
    const auto& p = dist.values();
    for (std::size_t n = 1; n < p.size(); ++n) {
        m += static_cast<double>(n) * p[n];
    }
    return m;
}

PhononDistribution thermal_distribution(double n_th, std::size_t n_max, Diagnostics* diag)
{
    if (!(n_th >= 0.0) || !std::isfinite(n_th)) {
        throw DomainError("thermal phonon number must be finite and non-negative");
    }
    if (n_max < 1) {
        throw DomainError("thermal distribution needs n_max >= 1");
    }
    const double x = n_th / (n_th + 1.0);
    std::vector<double> p(n_max + 1);
    double w = 1.0;
    for (auto& v : p) {
        v = w;
        w *= x;
    }
    const double top_ratio = p.back();
    if (top_ratio > default_tail_tol) {
        warn(diag, WarningCode::truncation_overflow,
             "thermal tail ratio " + fmt_double(top_ratio) + " at n_max = " + std::to_string(n_max));
    }
    return PhononDistribution(std::move(p));
}

PhononDistribution thermal_distribution_auto(double n_th, double tail_tol)
{
    for (std::size_t n = default_n_max(n_th); n <= max_truncation; n = grown_n_max(n)) {
        auto d = thermal_distribution(n_th, n);
        if (d.tail_ok(tail_tol)) {
            return d;
        }
    }
    throw TruncationOverflow("thermal distribution needs more than " + std::to_string(max_truncation) + " levels");
}

} // namespace phononcool
