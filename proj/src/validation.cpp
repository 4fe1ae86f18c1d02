#include "kbo/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kbo/diagnostics.hpp"
#include "kbo/kbo_core.hpp"
#include "kbo/parallel.hpp"

namespace kbo {

namespace {

constexpr std::size_t kBlockSize = 4096;

}  // namespace

double DensityGrid::mass() const
{
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum * cell_width();
}

void DensityGrid::check() const
{
    if (!(lo < hi) || m_x == 0) {
        throw std::invalid_argument("density grid: need lo < hi and m_x >= 1");
    }
}

void ValidationConfig::validate() const
{
    if (alpha != 1.0) {
        throw std::invalid_argument("validation: the closed-form solution needs alpha = 1");
    }
    if (!(dt > 0.0) || !(t_final >= 0.0) || nu * dt > 1.0 || nu < 0.0) {
        throw std::invalid_argument("validation: need dt > 0, t_final >= 0, 0 <= nu dt <= 1");
    }
    if (gamma < 0.0 || sigma < 0.0) {
        throw std::invalid_argument("validation: gamma and sigma must be >= 0");
    }
    if (n_particles == 0) {
        throw std::invalid_argument("validation: n_particles must be >= 1");
    }
    grid.check();
}

double exact_scale(double t)
{
    double const e = std::exp(-t);
    return e / (2.0 - e);
}

double exact_solution(double x, double t)
{
    if (t < 0.0) {
        throw std::invalid_argument("exact_solution: t must be >= 0");
    }
    double const b = exact_scale(t);
    return b / (std::numbers::pi * (b * b + x * x));
}

std::size_t validation_step(std::span<double> positions, const ValidationConfig& config,
                            RngStream& stream)
{
    double const nu_dt = config.nu * config.dt;
    double const jump_scale = jump_coefficient(config.gamma, config.dt, config.alpha);
    double const gauss_scale = config.sigma * std::sqrt(config.dt);
    StableLaw const law(config.alpha);
    std::size_t escaped = 0;
    for (double& position : positions) {
        if (!std::isfinite(position)) {
            ++escaped;
            continue;
        }
        double x = contract_toward(position, 0.0, nu_dt);
        double const diffusion = x * x;
        double increment = 0.0;
        if (gauss_scale > 0.0) {
            increment += gauss_scale * diffusion * stream.normal();
        }
        if (jump_scale > 0.0) {
            increment += jump_scale * diffusion * sample_stable(law, stream);
        }
        position = x + increment;
        if (!std::isfinite(position)) {
            position = std::numeric_limits<double>::quiet_NaN();
            ++escaped;
        }
    }
    return escaped;
}

std::map<double, std::vector<double>> simulate_validation(
    const ValidationConfig& config, std::span<const double> snapshot_times,
    std::size_t workers)
{
    config.validate();
    std::vector<long> snapshot_steps;
    long last_step = 0;
    for (double t : snapshot_times) {
        if (t < 0.0) {
            throw std::invalid_argument("validation: snapshot time must be >= 0");
        }
        long const step = std::lround(t / config.dt);
        snapshot_steps.push_back(step);
        last_step = std::max(last_step, step);
    }

    std::map<double, std::vector<double>> out;
    std::vector<std::vector<double>*> targets;
    for (double t : snapshot_times) {
        auto& slot = out[t];
        slot.resize(config.n_particles);
        targets.push_back(&slot);
    }

    std::size_t const n_blocks = (config.n_particles + kBlockSize - 1) / kBlockSize;
    auto run_block = [&](std::size_t b) {
        std::size_t const begin = b * kBlockSize;
        std::size_t const end = std::min(config.n_particles, begin + kBlockSize);
        RngStream stream = RngStream::derive(config.seed, b);
        std::vector<double> x(end - begin);
        StableLaw const initial(1.0);
        fill_stable(initial, x, stream);

        auto store = [&](long step) {
            for (std::size_t s = 0; s < snapshot_steps.size(); ++s) {
                if (snapshot_steps[s] == step) {
                    std::copy(x.begin(), x.end(),
                              targets[s]->begin() + static_cast<std::ptrdiff_t>(begin));
                }
            }
        };
        store(0);
        for (long step = 1; step <= last_step; ++step) {
            validation_step(x, config, stream);
            store(step);
        }
    };
    // Each block writes a disjoint slice of preallocated vectors.
    parallel_for(n_blocks, workers, run_block);
    return out;
}

DensityGrid reconstruct_density(std::span<const double> samples,
                                const DensityGrid& grid)
{
    grid.check();
    if (samples.empty()) {
        throw std::invalid_argument("reconstruct_density: no samples");
    }
    DensityGrid out = grid;
    out.values.assign(grid.m_x, 0.0);
    std::vector<std::size_t> counts(grid.m_x, 0);
    double const width = grid.cell_width();
    for (double x : samples) {
        if (!(x >= grid.lo && x <= grid.hi)) {
            continue;
        }
        auto k = static_cast<std::size_t>((x - grid.lo) / width);
        k = std::min(k, grid.m_x - 1);
        ++counts[k];
    }
    double const norm = 1.0 / (static_cast<double>(samples.size()) * width);
    for (std::size_t k = 0; k < grid.m_x; ++k) {
        out.values[k] = static_cast<double>(counts[k]) * norm;
    }
    return out;
}

double linf_error(const DensityGrid& numeric, double t)
{
    numeric.check();
    if (numeric.values.size() != numeric.m_x) {
        throw std::invalid_argument("linf_error: grid values do not match m_x");
    }
    double err = 0.0;
    for (std::size_t k = 0; k < numeric.m_x; ++k) {
        err = std::max(err, std::abs(exact_solution(numeric.center(k), t)
                                     - numeric.values[k]));
    }
    return err;
}

ConvergenceResult convergence_study(const ValidationConfig& config,
                                    std::span<const std::size_t> n_values,
                                    std::size_t workers)
{
    if (n_values.size() < 3) {
        throw std::invalid_argument("convergence_study: need at least 3 particle counts");
    }
    if (!std::is_sorted(n_values.begin(), n_values.end())
        || std::adjacent_find(n_values.begin(), n_values.end()) != n_values.end()) {
        throw std::invalid_argument("convergence_study: particle counts must be ascending");
    }
    ConvergenceResult result;
    std::vector<double> log_n;
    std::vector<double> log_err;
    double const times[] = {config.t_final};
    for (std::size_t n : n_values) {
        ValidationConfig run = config;
        run.n_particles = n;
        auto snapshots = simulate_validation(run, times, workers);
        DensityGrid const density =
            reconstruct_density(snapshots.at(config.t_final), config.grid);
        double const err = linf_error(density, config.t_final);
        result.points.push_back({n, err});
        log_n.push_back(std::log(static_cast<double>(n)));
        log_err.push_back(std::log(err));
    }
    result.slope = least_squares_slope(log_n, log_err);
    return result;
}

}  // namespace kbo
