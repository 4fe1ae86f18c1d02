#include "kbo/kbo_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kbo/diagnostics.hpp"

namespace kbo {

std::string to_string(DiffusionMode mode)
{
    return mode == DiffusionMode::isotropic ? "isotropic" : "anisotropic";
}

std::string to_string(StallMode mode)
{
    return mode == StallMode::consecutive ? "consecutive" : "cumulative";
}

std::string to_string(Termination t)
{
    return t == Termination::stall ? "stall" : "max_iter";
}

DiffusionMode parse_diffusion_mode(const std::string& text)
{
    if (text == "isotropic") {
        return DiffusionMode::isotropic;
    }
    if (text == "anisotropic") {
        return DiffusionMode::anisotropic;
    }
    throw std::invalid_argument("diffusion_mode must be isotropic or anisotropic, got '"
                                + text + "'");
}

StallMode parse_stall_mode(const std::string& text)
{
    if (text == "consecutive") {
        return StallMode::consecutive;
    }
    if (text == "cumulative") {
        return StallMode::cumulative;
    }
    throw std::invalid_argument("stall_mode must be consecutive or cumulative, got '"
                                + text + "'");
}

void KboConfig::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok) {
            throw std::invalid_argument(std::string("invalid config: ") + what);
        }
    };
    require(nu >= 0.0 && std::isfinite(nu), "nu must be >= 0");
    require(sigma >= 0.0 && std::isfinite(sigma), "sigma must be >= 0");
    require(gamma >= 0.0 && std::isfinite(gamma), "gamma must be >= 0");
    require(alpha > 0.0 && alpha <= 2.0, "alpha must lie in (0, 2]");
    require(beta > 0.0, "beta must be > 0");
    require(dt > 0.0 && std::isfinite(dt), "dt must be > 0");
    require(nu * dt <= 1.0, "nu * dt must be <= 1");
    require(n_t >= 1, "n_t must be >= 1");
    require(n_particles >= 1, "n_particles must be >= 1");
    require(dim >= 1, "dim must be >= 1");
    require(delta_stall >= 0.0, "delta_stall must be >= 0");
    require(j_stall >= 1, "j_stall must be >= 1");
    require(!noise_clip || *noise_clip > 0.0, "noise_clip must be > 0");
    require(vp_exponent > 0.0, "vp_exponent must be > 0");
    if (init_box) {
        require(init_box->dim() == dim, "init_box dimension must equal dim");
        init_box->check();
    }
}

ParticleEnsemble::ParticleEnsemble(std::size_t n_particles, std::size_t dim)
    : n_(n_particles), d_(dim), data_(n_particles * dim, 0.0)
{
    if (n_ == 0 || d_ == 0) {
        throw std::invalid_argument("ensemble needs at least one particle and dim >= 1");
    }
}

ParticleEnsemble::ParticleEnsemble(std::size_t dim, std::vector<double> positions)
    : n_(dim ? positions.size() / dim : 0), d_(dim), data_(std::move(positions))
{
    if (n_ == 0 || d_ == 0 || data_.size() != n_ * d_) {
        throw std::invalid_argument("ensemble: position count is not a positive "
                                    "multiple of dim");
    }
}

void ParticleEnsemble::check_finite() const
{
    for (std::size_t i = 0; i < n_; ++i) {
        for (double x : particle(i)) {
            if (!std::isfinite(x)) {
                throw std::runtime_error("non-finite position for particle "
                                         + std::to_string(i) + " at step "
                                         + std::to_string(step_));
            }
        }
    }
}

ParticleEnsemble init_ensemble(std::size_t n_particles, const Box& box,
                               RngStream& stream)
{
    box.check();
    ParticleEnsemble ensemble(n_particles, box.dim());
    for (std::size_t i = 0; i < n_particles; ++i) {
        auto x = ensemble.particle(i);
        for (std::size_t k = 0; k < x.size(); ++k) {
            x[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * stream.uniform();
        }
    }
    return ensemble;
}

ParticleEnsemble init_ensemble(const KboConfig& config, RngStream& stream)
{
    if (!config.init_box) {
        throw std::invalid_argument("init_ensemble: config has no init_box");
    }
    return init_ensemble(config.n_particles, *config.init_box, stream);
}

ConsensusState consensus_from_energies(const ParticleEnsemble& ensemble,
                                       std::span<const double> energies,
                                       double beta)
{
    if (!(beta > 0.0)) {
        throw std::invalid_argument("consensus: beta must be > 0");
    }
    std::size_t const n = ensemble.n_particles();
    std::size_t const d = ensemble.dim();
    if (energies.size() != n) {
        throw std::invalid_argument("consensus: one energy per particle required");
    }

    double e_min = std::numeric_limits<double>::infinity();
    for (double e : energies) {
        if (std::isfinite(e)) {
            e_min = std::min(e_min, e);
        }
    }
    if (!std::isfinite(e_min)) {
        throw std::invalid_argument("consensus: no particle has a finite energy");
    }

    ConsensusState state;
    state.point.assign(d, 0.0);
    state.best_particle_energy = e_min;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(energies[i])) {
            continue;
        }
        double const w = std::exp(-beta * (energies[i] - e_min));
        if (w == 0.0) {
            continue;
        }
        total += w;
        auto const x = ensemble.particle(i);
        for (std::size_t k = 0; k < d; ++k) {
            state.point[k] += w * x[k];
        }
    }
    // total >= 1: the minimizing particle has weight exactly 1.
    for (double& c : state.point) {
        c /= total;
    }
    state.weight_log_normalizer = std::log(total);
    return state;
}

ConsensusState consensus_point(const ParticleEnsemble& ensemble,
                               const Objective& obj, double beta)
{
    std::vector<double> energies(ensemble.n_particles());
    for (std::size_t i = 0; i < energies.size(); ++i) {
        energies[i] = eval_objective(obj, ensemble.particle(i));
    }
    return consensus_from_energies(ensemble, energies, beta);
}

double jump_coefficient(double gamma, double dt, double alpha)
{
    return gamma * std::pow(dt, 1.0 / alpha);
}

void drift_step(ParticleEnsemble& ensemble, std::span<const double> consensus,
                double nu, double dt)
{
    double const nu_dt = nu * dt;
    if (nu_dt < 0.0 || nu_dt > 1.0) {
        throw std::invalid_argument("drift_step: nu * dt must lie in [0, 1]");
    }
    if (nu_dt == 0.0) {
        return;
    }
    for (std::size_t i = 0; i < ensemble.n_particles(); ++i) {
        auto x = ensemble.particle(i);
        for (std::size_t k = 0; k < x.size(); ++k) {
            x[k] = contract_toward(x[k], consensus[k], nu_dt);
        }
    }
}

namespace {

double euclidean_distance(std::span<const double> a, std::span<const double> b)
{
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double const diff = a[k] - b[k];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

// out += scale * D(consensus, x) noise
void add_diffused(std::span<double> out, std::span<const double> consensus,
                  std::span<const double> x, DiffusionMode mode,
                  std::span<const double> noise, double scale)
{
    if (mode == DiffusionMode::isotropic) {
        double const r = scale * euclidean_distance(consensus, x);
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] += r * noise[k];
        }
    } else {
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] += scale * (consensus[k] - x[k]) * noise[k];
        }
    }
}

}  // namespace

std::vector<double> diffusion_apply(std::span<const double> consensus,
                                    std::span<const double> x, DiffusionMode mode,
                                    std::span<const double> noise)
{
    if (consensus.size() != x.size() || noise.size() != x.size()) {
        throw std::invalid_argument("diffusion_apply: dimension mismatch");
    }
    std::vector<double> out(x.size(), 0.0);
    add_diffused(out, consensus, x, mode, noise, 1.0);
    return out;
}

void diffusion_step(ParticleEnsemble& ensemble, std::span<const double> consensus,
                    const KboConfig& config, RngStream& stream)
{
    std::size_t const d = ensemble.dim();
    if (consensus.size() != d) {
        throw std::invalid_argument("diffusion_step: consensus has wrong dimension");
    }
    double const gauss_scale = config.sigma * std::sqrt(config.dt);
    double const jump_scale = jump_coefficient(config.gamma, config.dt, config.alpha);
    bool const use_gauss = gauss_scale > 0.0;
    bool const use_jumps = jump_scale > 0.0;
    if (!use_gauss && !use_jumps) {
        return;
    }

    StableLaw const law(config.alpha);
    std::vector<double> z(d);
    std::vector<double> z_jump(d);
    std::vector<double> increment(d);
    std::vector<double> jump(d);
    for (std::size_t i = 0; i < ensemble.n_particles(); ++i) {
        auto x = ensemble.particle(i);
        std::fill(increment.begin(), increment.end(), 0.0);
        if (use_gauss) {
            for (double& v : z) {
                v = stream.normal();
            }
            add_diffused(increment, consensus, x, config.diffusion_mode, z,
                         gauss_scale);
        }
        if (use_jumps) {
            fill_stable(law, z_jump, stream);
            std::fill(jump.begin(), jump.end(), 0.0);
            add_diffused(jump, consensus, x, config.diffusion_mode, z_jump,
                         jump_scale);
            if (config.noise_clip) {
                double const c = *config.noise_clip;
                for (double& v : jump) {
                    v = std::clamp(v, -c, c);
                }
            }
            for (std::size_t k = 0; k < d; ++k) {
                increment[k] += jump[k];
            }
        }
        for (std::size_t k = 0; k < d; ++k) {
            x[k] += increment[k];
            if (!std::isfinite(x[k])) {
                throw std::runtime_error("non-finite position for particle "
                                         + std::to_string(i) + " at step "
                                         + std::to_string(ensemble.step_index()));
            }
        }
    }
}

void advance(ParticleEnsemble& ensemble, std::span<const double> consensus,
             const KboConfig& config, RngStream& stream)
{
    drift_step(ensemble, consensus, config.nu, config.dt);
    diffusion_step(ensemble, consensus, config, stream);
    ensemble.set_step_index(ensemble.step_index() + 1);
}

ConsensusState kbo_step(ParticleEnsemble& ensemble, const Objective& obj,
                        const KboConfig& config, RngStream& stream)
{
    ConsensusState state = consensus_point(ensemble, obj, config.beta);
    advance(ensemble, state.point, config, stream);
    return state;
}

namespace {

double inf_distance(std::span<const double> a, std::span<const double> b)
{
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        m = std::max(m, std::abs(a[k] - b[k]));
    }
    return m;
}

}  // namespace

RunRecord run(const Objective& obj, const KboConfig& config)
{
    config.validate();
    if (config.dim != obj.dim) {
        throw std::invalid_argument("run: config dim " + std::to_string(config.dim)
                                    + " does not match objective '" + obj.name
                                    + "' of dim " + std::to_string(obj.dim));
    }
    RngStream stream(config.seed);
    Box const& box = config.init_box ? *config.init_box : obj.init_box;
    ParticleEnsemble ensemble = init_ensemble(config.n_particles, box, stream);

    RunRecord record;
    auto observe = [&](const ConsensusState& state) {
        if (!config.record_trajectories) {
            return;
        }
        record.consensus_trajectory.push_back(state.point);
        double const t = static_cast<double>(ensemble.step_index()) * config.dt;
        record.vp_trajectory.emplace_back(
            t, v_p_moment(ensemble, obj.minimizer, config.vp_exponent));
    };

    ConsensusState current = consensus_point(ensemble, obj, config.beta);
    observe(current);
    int n = 0;
    int stalled = 0;
    while (n < config.n_t && stalled < config.j_stall) {
        advance(ensemble, current.point, config, stream);
        ConsensusState next = consensus_point(ensemble, obj, config.beta);
        if (inf_distance(next.point, current.point) <= config.delta_stall) {
            ++stalled;
        } else if (config.stall_mode == StallMode::consecutive) {
            stalled = 0;
        }
        current = std::move(next);
        ++n;
        observe(current);
    }

    record.iterations_used = n;
    record.terminated_by =
        stalled >= config.j_stall ? Termination::stall : Termination::max_iter;
    record.success = success_check(current.point, obj.minimizer);
    record.final_consensus = std::move(current.point);
    return record;
}

}  // namespace kbo
