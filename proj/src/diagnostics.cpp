#include "kbo/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kbo/kbo_core.hpp"

namespace kbo {

namespace {

double distance(std::span<const double> a, std::span<const double> b)
{
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double const diff = a[k] - b[k];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

void require_strip(int d, double p, double alpha)
{
    if (d < 1) {
        throw std::invalid_argument("theory constants: d must be >= 1");
    }
    if (!(1.0 < p && p < alpha && alpha < 2.0)) {
        throw std::invalid_argument("theory constants: need 1 < p < alpha < 2, got p = "
                                    + std::to_string(p)
                                    + ", alpha = " + std::to_string(alpha));
    }
}

}  // namespace

MomentParams MomentParams::theory(double p, double alpha, std::vector<double> target)
{
    if (!(1.0 < p && p < alpha && alpha < 2.0)) {
        throw std::invalid_argument("moment params: theory mode needs 1 < p < alpha < 2");
    }
    return MomentParams{p, std::move(target)};
}

double v_p_moment(const ParticleEnsemble& ensemble, std::span<const double> target,
                  double p)
{
    if (target.size() != ensemble.dim()) {
        throw std::invalid_argument("v_p_moment: target has wrong dimension");
    }
    if (!(p > 0.0)) {
        throw std::invalid_argument("v_p_moment: p must be > 0");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < ensemble.n_particles(); ++i) {
        sum += std::pow(distance(ensemble.particle(i), target), p);
    }
    return sum / static_cast<double>(ensemble.n_particles());
}

double v_p_moment(const ParticleEnsemble& ensemble, const MomentParams& params)
{
    return v_p_moment(ensemble, params.target, params.p);
}

bool success_check(std::span<const double> consensus,
                   std::span<const double> minimizer)
{
    if (consensus.size() != minimizer.size()) {
        throw std::invalid_argument("success_check: dimension mismatch");
    }
    for (std::size_t k = 0; k < consensus.size(); ++k) {
        if (!(std::abs(consensus[k] - minimizer[k]) <= kSuccessRadius)) {
            return false;
        }
    }
    return true;
}

double mass_in_ball(const ParticleEnsemble& ensemble, std::span<const double> center,
                    double r)
{
    if (!(r >= 0.0)) {
        throw std::invalid_argument("mass_in_ball: r must be >= 0");
    }
    if (center.size() != ensemble.dim()) {
        throw std::invalid_argument("mass_in_ball: center has wrong dimension");
    }
    std::size_t inside = 0;
    for (std::size_t i = 0; i < ensemble.n_particles(); ++i) {
        if (distance(ensemble.particle(i), center) <= r) {
            ++inside;
        }
    }
    return static_cast<double>(inside) / static_cast<double>(ensemble.n_particles());
}

double omega_d(int d)
{
    if (d < 1) {
        throw std::invalid_argument("omega_d: d must be >= 1");
    }
    double const half = 0.5 * d;
    return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double b_p_alpha(int d, double p, double alpha)
{
    require_strip(d, p, alpha);
    double const numer = std::pow(2.0, alpha) * std::tgamma(0.5 * (d + p))
                         * std::tgamma(0.5 * (alpha - p));
    double const denom =
        std::abs(std::tgamma(-0.5 * p)) + std::tgamma(0.5 * (d + p - alpha));
    return numer / denom;
}

double b_p_alpha_product(int d, double p, double alpha)
{
    require_strip(d, p, alpha);
    double const numer = std::pow(2.0, alpha) * std::tgamma(0.5 * (d + p))
                         * std::tgamma(0.5 * (alpha - p));
    double const denom =
        std::abs(std::tgamma(-0.5 * p)) * std::tgamma(0.5 * (d + p - alpha));
    return numer / denom;
}

TheoryConstants c_p_alpha(double nu, double gamma, int d, double p, double alpha)
{
    TheoryConstants out;
    out.b_p_alpha = b_p_alpha(d, p, alpha);
    double const jump_part = std::pow(gamma, alpha) * out.b_p_alpha;
    out.c_p_alpha = nu * p - jump_part;
    out.omega_d = omega_d(d);
    out.condition_ok = nu * p > jump_part;
    return out;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("least_squares_slope: need >= 2 paired points");
    }
    auto const n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("least_squares_slope: abscissae are all equal");
    }
    return sxy / sxx;
}

double fit_decay_rate(std::span<const std::pair<double, double>> vp_trajectory,
                      double burn_in_fraction)
{
    if (vp_trajectory.size() < 3) {
        throw std::invalid_argument("fit_decay_rate: need >= 3 samples");
    }
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) {
        throw std::invalid_argument("fit_decay_rate: burn-in fraction must lie in [0, 1)");
    }
    for (auto const& [t, vp] : vp_trajectory) {
        if (!(vp > 0.0)) {
            throw std::invalid_argument("fit_decay_rate: V_p must be positive, got "
                                        + std::to_string(vp) + " at t = "
                                        + std::to_string(t));
        }
    }
    auto skip = static_cast<std::size_t>(
        std::floor(burn_in_fraction * static_cast<double>(vp_trajectory.size())));
    skip = std::min(skip, vp_trajectory.size() - 2);
    std::vector<double> t;
    std::vector<double> log_vp;
    for (std::size_t i = skip; i < vp_trajectory.size(); ++i) {
        t.push_back(vp_trajectory[i].first);
        log_vp.push_back(std::log(vp_trajectory[i].second));
    }
    return -least_squares_slope(t, log_vp);
}

}  // namespace kbo
