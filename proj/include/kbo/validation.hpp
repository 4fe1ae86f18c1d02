#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "kbo/stable_rng.hpp"

namespace kbo {

/// Uniform 1D histogram grid; values live at cell centers.
struct DensityGrid {
    double lo = -20.0;
    double hi = 20.0;
    std::size_t m_x = 1024;
    std::vector<double> values;

    double cell_width() const noexcept { return (hi - lo) / static_cast<double>(m_x); }
    double center(std::size_t k) const noexcept
    {
        return lo + (static_cast<double>(k) + 0.5) * cell_width();
    }
    /// Integral of the histogram over [lo, hi].
    double mass() const;
    void check() const;
};

/// 1D dynamics with consensus pinned at 0 and D(0, x) = x^2, started from a
/// standard Cauchy density.
struct ValidationConfig {
    std::size_t n_particles = 1'000'000;
    double dt = 0.01;
    double t_final = 2.0;
    double alpha = 1.0;
    double nu = 1.0;
    double gamma = 1.0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    /// Histogram window and resolution.
    DensityGrid grid{};

    /// Throws unless alpha == 1 and the step sizes are usable.
    void validate() const;
};

/// Scale of the closed-form solution: e^{-t} / (2 - e^{-t}).
double exact_scale(double t);
/// Cauchy density with scale exact_scale(t).
double exact_solution(double x, double t);

/// One drift + jump step for every position, in place. With D = x^2 a
/// particle far in the tail runs away to overflow; such positions become NaN,
/// are never updated again and count as mass outside any window. Returns the
/// number of non-finite positions after the step.
std::size_t validation_step(std::span<double> positions, const ValidationConfig& config,
                            RngStream& stream);

/// Particle positions at each requested time (rounded to the nearest step).
/// Particles are split in fixed blocks with their own derived streams, so
/// the result does not depend on `workers`.
std::map<double, std::vector<double>> simulate_validation(
    const ValidationConfig& config, std::span<const double> snapshot_times,
    std::size_t workers);

/// Histogram density on the geometry of `grid`. Samples outside [lo, hi]
/// count toward the total but land in no cell. Throws on empty input.
DensityGrid reconstruct_density(std::span<const double> samples,
                                const DensityGrid& grid);

/// max_k |f_exact(center_k, t) - values_k|.
double linf_error(const DensityGrid& numeric, double t);

struct ConvergencePoint {
    std::size_t n_particles;
    double error;
};

struct ConvergenceResult {
    std::vector<ConvergencePoint> points;
    /// Least-squares slope of log(error) against log(N).
    double slope = 0.0;
};

/// L-infinity error at t_final for each N (ascending, >= 3 entries).
ConvergenceResult convergence_study(const ValidationConfig& config,
                                    std::span<const std::size_t> n_values,
                                    std::size_t workers);

}  // namespace kbo
