#include "kbo/stable_rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kbo {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

RngStream RngStream::derive(std::uint64_t seed, std::uint64_t index)
{
    return RngStream(mix_seed(seed, index));
}

double RngStream::raw_uniform()
{
    // 53 random bits, shifted by half an ulp so 0 is never returned.
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * kScale;
}

double RngStream::uniform()
{
    ++draw_count_;
    return raw_uniform();
}

double RngStream::exponential()
{
    ++draw_count_;
    return -std::log(raw_uniform());
}

double RngStream::normal()
{
    ++draw_count_;
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    // Box-Muller; the second variate is kept for the next call.
    double const radius = std::sqrt(-2.0 * std::log(raw_uniform()));
    double const angle = 2.0 * std::numbers::pi * raw_uniform();
    spare_normal_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

StableLaw::StableLaw(double alpha, double scale) : alpha_(alpha), scale_(scale)
{
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw std::invalid_argument("stable law: alpha must lie in (0, 2], got "
                                    + std::to_string(alpha));
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw std::invalid_argument("stable law: scale must be positive");
    }
}

double StableLaw::char_fn(double kappa) const
{
    return std::exp(-std::pow(std::abs(scale_ * kappa), alpha_));
}

double sample_normal(RngStream& stream)
{
    return stream.normal();
}

namespace {

double standard_stable(double alpha, RngStream& stream)
{
    if (alpha == 2.0) {
        return std::numbers::sqrt2 * stream.normal();
    }
    double const v = std::numbers::pi * (stream.uniform() - 0.5);
    if (alpha == 1.0) {
        return std::tan(v);
    }
    double const w = stream.exponential();
    double const av = alpha * v;
    return std::sin(av) / std::pow(std::cos(v), 1.0 / alpha)
           * std::pow(std::cos(v - av) / w, (1.0 - alpha) / alpha);
}

}  // namespace

double sample_stable(const StableLaw& law, RngStream& stream)
{
    return law.scale() * standard_stable(law.alpha(), stream);
}

void fill_stable(const StableLaw& law, std::span<double> out, RngStream& stream)
{
    for (double& x : out) {
        x = sample_stable(law, stream);
    }
}

std::vector<double> sample_stable_vector(const StableLaw& law, std::size_t d,
                                         RngStream& stream)
{
    if (d == 0) {
        throw std::invalid_argument("sample_stable_vector: d must be >= 1");
    }
    std::vector<double> out(d);
    fill_stable(law, out, stream);
    return out;
}

std::complex<double> empirical_char_fn(std::span<const double> samples,
                                       double kappa)
{
    if (samples.empty()) {
        throw std::invalid_argument("empirical_char_fn: no samples");
    }
    double re = 0.0;
    double im = 0.0;
    for (double x : samples) {
        re += std::cos(kappa * x);
        im += std::sin(kappa * x);
    }
    auto const n = static_cast<double>(samples.size());
    return {re / n, im / n};
}

}  // namespace kbo
