#include "kbo/stable_rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

namespace kbo {
namespace {

constexpr std::size_t kDraws = 1'000'000;

std::vector<double> draw_stable(double alpha, std::uint64_t seed,
                                std::size_t n = kDraws)
{
    RngStream stream(seed);
    StableLaw const law(alpha);
    std::vector<double> out(n);
    fill_stable(law, out, stream);
    return out;
}

double quantile(std::vector<double> v, double q)
{
    auto const k = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

TEST(RngStreamTest, normal_moments)
{
    RngStream stream(12345);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < kDraws; ++i) {
        double const z = sample_normal(stream);
        sum += z;
        sum_sq += z * z;
    }
    double const mean = sum / kDraws;
    double const var = sum_sq / kDraws - mean * mean;
    EXPECT_NEAR(mean, 0.0, 0.005);
    EXPECT_NEAR(var, 1.0, 0.01);
}

TEST(RngStreamTest, same_seed_same_sequence)
{
    RngStream a(99);
    RngStream b(99);
    for (int i = 0; i < 100; ++i) {
        ASSERT_EQ(sample_normal(a), sample_normal(b));
    }
    RngStream c(100);
    EXPECT_NE(sample_normal(a), sample_normal(c));
}

TEST(RngStreamTest, draw_count_tracks_variates)
{
    RngStream s(1);
    EXPECT_EQ(s.draw_count(), 0u);
    s.uniform();
    s.normal();
    s.normal();
    s.exponential();
    EXPECT_EQ(s.draw_count(), 4u);
    sample_stable(StableLaw(1.5), s);
    EXPECT_GT(s.draw_count(), 4u);
}

TEST(RngStreamTest, derived_streams_differ)
{
    RngStream a = RngStream::derive(7, 0);
    RngStream b = RngStream::derive(7, 1);
    RngStream a2 = RngStream::derive(7, 0);
    EXPECT_NE(a.seed(), b.seed());
    EXPECT_EQ(a.uniform(), a2.uniform());
}

TEST(RngStreamTest, uniform_open_interval)
{
    RngStream s(3);
    for (int i = 0; i < 100000; ++i) {
        double const u = s.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(StableLawTest, rejects_bad_alpha)
{
    EXPECT_THROW(StableLaw(0.0), std::invalid_argument);
    EXPECT_THROW(StableLaw(-1.0), std::invalid_argument);
    EXPECT_THROW(StableLaw(2.0001), std::invalid_argument);
    EXPECT_THROW(StableLaw(std::nan("")), std::invalid_argument);
    EXPECT_NO_THROW(StableLaw(2.0));
    EXPECT_NO_THROW(StableLaw(0.3));
}

TEST(StableLawTest, gaussian_limit_has_variance_two)
{
    auto const x = draw_stable(2.0, 21);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : x) {
        sum += v;
        sum_sq += v * v;
    }
    double const mean = sum / kDraws;
    EXPECT_NEAR(sum_sq / kDraws - mean * mean, 2.0, 0.02);
}

TEST(StableLawTest, cauchy_quartiles)
{
    // Standard Cauchy: Q(3/4) = tan(pi/4) = 1.
    auto const x = draw_stable(1.0, 22);
    EXPECT_NEAR(quantile(x, 0.5), 0.0, 0.01);
    EXPECT_NEAR(quantile(x, 0.25), -1.0, 0.02);
    EXPECT_NEAR(quantile(x, 0.75), 1.0, 0.02);
}

TEST(StableLawTest, char_fn_at_one_for_alpha_1_5)
{
    auto const x = draw_stable(1.5, 23);
    EXPECT_NEAR(empirical_char_fn(x, 1.0).real(), std::exp(-1.0), 0.01);
}

TEST(StableLawTest, char_fn_matches_on_grid)
{
    double const tol = 5.0 / std::sqrt(static_cast<double>(kDraws)) + 1e-3;
    std::uint64_t seed = 100;
    for (double alpha : {1.0, 1.25, 1.5, 1.75, 2.0}) {
        auto const x = draw_stable(alpha, seed++);
        StableLaw const law(alpha);
        for (double kappa : {0.25, 0.5, 1.0, 2.0}) {
            auto const phi = empirical_char_fn(x, kappa);
            EXPECT_LE(std::abs(phi - std::complex<double>(law.char_fn(kappa), 0.0)), tol)
                << "alpha=" << alpha << " kappa=" << kappa;
        }
    }
}

TEST(StableLawTest, sign_symmetry)
{
    std::uint64_t seed = 200;
    for (double alpha : {0.7, 1.0, 1.25, 1.5, 1.75, 2.0}) {
        auto const x = draw_stable(alpha, seed++);
        double s = 0.0;
        for (double v : x) {
            s += (v > 0.0) - (v < 0.0);
        }
        EXPECT_LE(std::abs(s / kDraws), 0.005) << "alpha=" << alpha;
    }
}

TEST(StableLawTest, cauchy_stable_under_averaging)
{
    auto const x = draw_stable(1.0, 31, 2 * kDraws);
    std::vector<double> avg(kDraws);
    for (std::size_t i = 0; i < kDraws; ++i) {
        avg[i] = 0.5 * (x[2 * i] + x[2 * i + 1]);
    }
    EXPECT_NEAR(quantile(avg, 0.25), -1.0, 0.02);
    EXPECT_NEAR(quantile(avg, 0.75), 1.0, 0.02);
}

TEST(StableLawTest, scale_parameter)
{
    RngStream stream(41);
    StableLaw const law(1.0, 3.0);
    std::vector<double> x(kDraws);
    fill_stable(law, x, stream);
    EXPECT_NEAR(quantile(x, 0.75), 3.0, 0.06);
    EXPECT_NEAR(law.char_fn(0.5), std::exp(-1.5), 1e-15);
}

TEST(StableVectorTest, single_component_matches_scalar)
{
    RngStream a(5);
    RngStream b(5);
    StableLaw const law(1.5);
    auto const v = sample_stable_vector(law, 1, a);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0], sample_stable(law, b));
}

TEST(StableVectorTest, gaussian_components_are_iid)
{
    RngStream stream(6);
    StableLaw const law(2.0);
    double cov[3][3] = {};
    for (std::size_t i = 0; i < kDraws; ++i) {
        auto const v = sample_stable_vector(law, 3, stream);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                cov[a][b] += v[a] * v[b];
            }
        }
    }
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            EXPECT_NEAR(cov[a][b] / kDraws, a == b ? 2.0 : 0.0, 0.05);
        }
    }
}

TEST(StableVectorTest, reproducible)
{
    RngStream a(77);
    RngStream b(77);
    StableLaw const law(1.3);
    EXPECT_EQ(sample_stable_vector(law, 5, a), sample_stable_vector(law, 5, b));
    EXPECT_THROW(sample_stable_vector(law, 0, a), std::invalid_argument);
}

TEST(EmpiricalCharFnTest, trivial_inputs)
{
    std::vector<double> const zeros = {0.0, 0.0, 0.0};
    auto const phi = empirical_char_fn(zeros, 7.0);
    EXPECT_DOUBLE_EQ(phi.real(), 1.0);
    EXPECT_DOUBLE_EQ(phi.imag(), 0.0);

    std::vector<double> const one = {0.3};
    auto const single = empirical_char_fn(one, 2.5);
    EXPECT_DOUBLE_EQ(single.real(), std::cos(0.75));
    EXPECT_DOUBLE_EQ(single.imag(), std::sin(0.75));

    EXPECT_THROW(empirical_char_fn(std::vector<double>{}, 1.0), std::invalid_argument);
}

TEST(EmpiricalCharFnTest, cauchy_at_two)
{
    auto const x = draw_stable(1.0, 51);
    auto const phi = empirical_char_fn(x, 2.0);
    EXPECT_NEAR(phi.real(), std::exp(-2.0), 0.01);
    EXPECT_NEAR(phi.imag(), 0.0, 0.01);
}

}  // namespace
}  // namespace kbo
