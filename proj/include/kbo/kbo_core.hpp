#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kbo/objectives.hpp"
#include "kbo/stable_rng.hpp"

namespace kbo {

enum class DiffusionMode { isotropic, anisotropic };

/// How the stall counter reacts to a non-stalled iteration.
/// consecutive: reset to zero; cumulative: left untouched.
enum class StallMode { consecutive, cumulative };

enum class Termination { stall, max_iter };

std::string to_string(DiffusionMode mode);
std::string to_string(StallMode mode);
std::string to_string(Termination t);
DiffusionMode parse_diffusion_mode(const std::string& text);
StallMode parse_stall_mode(const std::string& text);

struct KboConfig {
    double nu = 1.0;
    double sigma = 0.0;
    double gamma = 2.0;
    double alpha = 1.5;
    double beta = 5e6;
    double dt = 0.1;
    int n_t = 10000;
    std::size_t n_particles = 200;
    std::size_t dim = 20;
    DiffusionMode diffusion_mode = DiffusionMode::anisotropic;
    double delta_stall = 1e-4;
    int j_stall = 1000;
    StallMode stall_mode = StallMode::consecutive;
    std::uint64_t seed = 0;
    /// Box for the initial uniform sample; the objective's box when unset.
    std::optional<Box> init_box;
    /// Bound on the magnitude of each jump increment component. Off by default.
    std::optional<double> noise_clip;

    /// Store the consensus point and V_p after every iteration.
    bool record_trajectories = false;
    /// Exponent p of the recorded V_p moment.
    double vp_exponent = 1.5;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// N particles in R^d, stored row-major.
class ParticleEnsemble {
  public:
    ParticleEnsemble(std::size_t n_particles, std::size_t dim);
    ParticleEnsemble(std::size_t dim, std::vector<double> positions);

    std::size_t n_particles() const noexcept { return n_; }
    std::size_t dim() const noexcept { return d_; }
    std::size_t step_index() const noexcept { return step_; }
    void set_step_index(std::size_t n) noexcept { step_ = n; }

    std::span<double> particle(std::size_t i) { return {data_.data() + i * d_, d_}; }
    std::span<const double> particle(std::size_t i) const
    {
        return {data_.data() + i * d_, d_};
    }
    std::span<const double> positions() const noexcept { return data_; }
    std::span<double> positions() noexcept { return data_; }

    /// Throws std::runtime_error naming the first particle with a non-finite
    /// coordinate.
    void check_finite() const;

  private:
    std::size_t n_;
    std::size_t d_;
    std::size_t step_ = 0;
    std::vector<double> data_;
};

struct ConsensusState {
    std::vector<double> point;
    /// log sum_i exp(-beta (E_i - min_j E_j)).
    double weight_log_normalizer = 0.0;
    double best_particle_energy = 0.0;
};

struct RunRecord {
    bool success = false;
    int iterations_used = 0;
    std::vector<double> final_consensus;
    std::vector<std::vector<double>> consensus_trajectory;
    std::vector<std::pair<double, double>> vp_trajectory;
    Termination terminated_by = Termination::max_iter;
};

ParticleEnsemble init_ensemble(std::size_t n_particles, const Box& box,
                               RngStream& stream);
ParticleEnsemble init_ensemble(const KboConfig& config, RngStream& stream);

/// Weighted mean with weights exp(-beta (E_i - min_j E_j)). Non-finite
/// energies get zero weight; throws if no energy is finite.
ConsensusState consensus_from_energies(const ParticleEnsemble& ensemble,
                                       std::span<const double> energies,
                                       double beta);
ConsensusState consensus_point(const ParticleEnsemble& ensemble,
                               const Objective& obj, double beta);

/// Distance-to-consensus scaling after one drift: c + (1 - nu dt)(x - c).
inline double contract_toward(double x, double c, double nu_dt) noexcept
{
    return c + (1.0 - nu_dt) * (x - c);
}

/// Time scaling gamma dt^(1/alpha) of the jump term.
double jump_coefficient(double gamma, double dt, double alpha);

void drift_step(ParticleEnsemble& ensemble, std::span<const double> consensus,
                double nu, double dt);

/// D(consensus, x) applied to `noise`.
std::vector<double> diffusion_apply(std::span<const double> consensus,
                                    std::span<const double> x, DiffusionMode mode,
                                    std::span<const double> noise);

/// Gaussian and stable increments through D evaluated at the current
/// (post-drift) positions.
void diffusion_step(ParticleEnsemble& ensemble, std::span<const double> consensus,
                    const KboConfig& config, RngStream& stream);

/// Drift then diffusion around a given consensus point; no objective calls.
void advance(ParticleEnsemble& ensemble, std::span<const double> consensus,
             const KboConfig& config, RngStream& stream);

/// One splitting step: consensus on the current ensemble, then advance.
ConsensusState kbo_step(ParticleEnsemble& ensemble, const Objective& obj,
                        const KboConfig& config, RngStream& stream);

/// Full run with stall-based termination. The stream is derived from
/// config.seed.
RunRecord run(const Objective& obj, const KboConfig& config);

}  // namespace kbo
