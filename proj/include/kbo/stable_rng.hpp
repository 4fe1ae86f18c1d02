#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace kbo {

/// Single-owner pseudo-random stream. Two streams built from the same seed
/// yield bit-identical sequences; child streams are derived deterministically
/// from (seed, index) so independent runs never share state.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed);

    /// Stream for sub-task `index` of a computation seeded with `seed`.
    static RngStream derive(std::uint64_t seed, std::uint64_t index);

    std::uint64_t seed() const noexcept { return seed_; }
    /// Number of scalar variates handed out so far.
    std::uint64_t draw_count() const noexcept { return draw_count_; }

    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();
    /// Exp(1).
    double exponential();

  private:
    double raw_uniform();

    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::uint64_t draw_count_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Symmetric alpha-stable law with characteristic function
/// exp(-|scale * kappa|^alpha).
class StableLaw {
  public:
    explicit StableLaw(double alpha, double scale = 1.0);

    double alpha() const noexcept { return alpha_; }
    double scale() const noexcept { return scale_; }

    /// Value of the characteristic function at `kappa`.
    double char_fn(double kappa) const;

  private:
    double alpha_;
    double scale_;
};

double sample_normal(RngStream& stream);

/// Chambers-Mallows-Stuck for general alpha, tan(V) for alpha = 1 and a
/// variance-2 Gaussian for alpha = 2. Heavy tails are never truncated.
double sample_stable(const StableLaw& law, RngStream& stream);

/// `d` i.i.d. draws of `law` (componentwise jumps).
std::vector<double> sample_stable_vector(const StableLaw& law, std::size_t d,
                                         RngStream& stream);

/// Fills `out` with i.i.d. draws of `law`.
void fill_stable(const StableLaw& law, std::span<double> out, RngStream& stream);

/// (1/n) sum_j exp(i kappa x_j). Throws on empty input.
std::complex<double> empirical_char_fn(std::span<const double> samples,
                                       double kappa);

}  // namespace kbo
