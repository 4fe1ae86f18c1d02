// Command-line runner for KBO experiments, presets, the 1D validation study
// and the theory constants.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kbo/diagnostics.hpp"
#include "kbo/harness.hpp"
#include "kbo/parallel.hpp"
#include "kbo/validation.hpp"

namespace fs = std::filesystem;

namespace {

struct ValidateOptions {
    std::size_t n_particles = 0;
    std::uint64_t seed = 1;
    std::vector<double> times = {0.1, 1.0, 2.0};
    std::vector<std::size_t> convergence;
    std::string output_dir = "validation";
};

void print_summary(const std::string& name, const std::vector<kbo::SweepResult>& results)
{
    for (const auto& r : results) {
        std::cerr << name << ": axis=" << r.axis_value
                  << " success_rate=" << kbo::format_number(r.success_rate)
                  << " mean_iterations=" << kbo::format_number(r.mean_iterations) << '\n';
    }
}

int run_validation(const ValidateOptions& opts, std::size_t workers)
{
    kbo::ValidationConfig config = kbo::validation_preset();
    if (opts.n_particles > 0) {
        config.n_particles = opts.n_particles;
    }
    config.seed = opts.seed;
    fs::path const dir(opts.output_dir);

    auto snapshots = kbo::simulate_validation(config, opts.times, workers);
    for (const auto& [t, samples] : snapshots) {
        kbo::DensityGrid const density = kbo::reconstruct_density(samples, config.grid);
        double const err = kbo::linf_error(density, t);
        kbo::write_text_file(dir / ("density_t" + kbo::format_number(t) + ".csv"),
                             kbo::format_density_csv(density, t));
        std::cout << "t=" << kbo::format_number(t) << " N=" << config.n_particles
                  << " linf_error=" << kbo::format_number(err)
                  << " mass_in_window=" << kbo::format_number(density.mass()) << '\n';
    }
    if (!opts.convergence.empty()) {
        auto const result = kbo::convergence_study(config, opts.convergence, workers);
        kbo::write_text_file(dir / "convergence.csv", kbo::format_convergence_csv(result));
        for (const auto& p : result.points) {
            std::cout << "N=" << p.n_particles
                      << " error=" << kbo::format_number(p.error) << '\n';
        }
        std::cout << "slope=" << kbo::format_number(result.slope) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kinetic consensus-based optimization with alpha-stable jumps"};
    app.require_subcommand(1);
    std::size_t workers = kbo::default_worker_count();
    app.add_option("--workers", workers, "Worker threads (default: KBO_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);

    // run
    auto* run_cmd = app.add_subcommand("run", "Run one experiment from a config file and flags");
    std::string config_path;
    run_cmd->add_option("--config", config_path, "Flat key = value config file")
        ->check(CLI::ExistingFile);
    std::map<std::string, std::string> overrides;
    for (const auto& key : kbo::config_keys()) {
        if (key == "iters_success_only") {
            continue;
        }
        run_cmd->add_option_function<std::string>(
            "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; },
            "Override '" + key + "'");
    }
    run_cmd->add_flag_function(
        "--iters-success-only",
        [&overrides](std::int64_t) { overrides["iters_success_only"] = "true"; },
        "Average iterations over successful runs only");

    // validate
    ValidateOptions vopts;
    auto* validate_cmd = app.add_subcommand("validate", "1D fractional dynamics against its closed form");
    validate_cmd->add_option("--n", vopts.n_particles, "Particles (default 1e6)");
    validate_cmd->add_option("--seed", vopts.seed, "Base seed");
    validate_cmd->add_option("--times", vopts.times, "Snapshot times")->delimiter(',');
    validate_cmd->add_option("--convergence", vopts.convergence,
                             "Particle counts for the error study, e.g. 1000,10000,100000")
        ->delimiter(',');
    validate_cmd->add_option("--output-dir", vopts.output_dir, "Directory for CSV output");

    // preset
    auto* preset_cmd = app.add_subcommand("preset", "Run a built-in experiment grid");
    std::string preset_name;
    std::string preset_dir = "results";
    std::optional<int> preset_runs;
    std::optional<int> preset_nt;
    std::optional<std::uint64_t> preset_seed;
    preset_cmd->add_option("name", preset_name, "test1, test2, test3, test4 or validate")
        ->required()
        ->check(CLI::IsMember(kbo::preset_names()));
    preset_cmd->add_option("--output-dir", preset_dir, "Directory for CSV output");
    preset_cmd->add_option("--m-runs", preset_runs, "Override runs per axis value");
    preset_cmd->add_option("--n-t", preset_nt, "Override the iteration cap");
    preset_cmd->add_option("--seed", preset_seed, "Override the base seed");

    // constants
    auto* const_cmd = app.add_subcommand("constants", "Print B_{p,alpha}, C_{p,alpha} and omega_d");
    int d = 1;
    double p = 1.2;
    double alpha = 1.5;
    double nu = 1.0;
    double gamma = 0.0;
    const_cmd->add_option("--d", d, "Dimension")->check(CLI::PositiveNumber);
    const_cmd->add_option("--p", p, "Moment exponent, 1 < p < alpha");
    const_cmd->add_option("--alpha", alpha, "Stability index, alpha < 2");
    const_cmd->add_option("--nu", nu, "Drift strength");
    const_cmd->add_option("--gamma", gamma, "Jump strength");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            kbo::ExperimentSpec const spec =
                config_path.empty() ? kbo::parse_config("", overrides)
                                    : kbo::parse_config_file(config_path, overrides);
            auto const results = kbo::run_experiment(spec, workers);
            if (spec.output.empty()) {
                std::cout << kbo::format_csv(results);
            } else {
                kbo::emit_csv(results, spec.output);
                print_summary(spec.output, results);
            }
        } else if (validate_cmd->parsed()) {
            return run_validation(vopts, workers);
        } else if (preset_cmd->parsed()) {
            if (preset_name == "validate") {
                ValidateOptions opts;
                opts.output_dir = preset_dir;
                if (preset_seed) {
                    opts.seed = *preset_seed;
                }
                opts.convergence = {1000, 10000, 100000, 1000000};
                return run_validation(opts, workers);
            }
            for (auto& [file, spec] : kbo::make_preset(preset_name)) {
                if (preset_runs) {
                    spec.m_runs = *preset_runs;
                }
                if (preset_nt) {
                    spec.base.n_t = *preset_nt;
                }
                if (preset_seed) {
                    spec.base_seed = *preset_seed;
                }
                auto const results = kbo::run_experiment(spec, workers);
                fs::path const out = fs::path(preset_dir) / file;
                kbo::emit_csv(results, out);
                print_summary(out.string(), results);
            }
        } else if (const_cmd->parsed()) {
            auto const c = kbo::c_p_alpha(nu, gamma, d, p, alpha);
            std::cout << "d=" << d << " p=" << kbo::format_number(p)
                      << " alpha=" << kbo::format_number(alpha) << '\n'
                      << "B_p_alpha=" << kbo::format_number(c.b_p_alpha) << '\n'
                      << "C_p_alpha=" << kbo::format_number(c.c_p_alpha) << '\n'
                      << "omega_d=" << kbo::format_number(c.omega_d) << '\n'
                      << "condition_ok=" << (c.condition_ok ? "true" : "false") << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "kbo: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
