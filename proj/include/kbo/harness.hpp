#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kbo/kbo_core.hpp"
#include "kbo/validation.hpp"

namespace kbo {

enum class SweepKind { none, gamma, sigma, dim, objective };

std::string to_string(SweepKind kind);
SweepKind parse_sweep_kind(const std::string& text);

/// Exactly one sweep axis. Numeric axes use `values`, the objective axis uses
/// `names`; kind == none runs the base configuration once.
struct SweepAxis {
    SweepKind kind = SweepKind::none;
    std::vector<double> values;
    std::vector<std::string> names;

    std::size_t size() const noexcept;
    std::string label(std::size_t i) const;
};

struct ExperimentSpec {
    std::string objective = "rastrigin";
    KboConfig base;
    SweepAxis axis;
    int m_runs = 20;
    std::uint64_t base_seed = 1;
    std::string output;
    /// Average iteration counts over successful runs only.
    bool iters_success_only = false;
    /// Init box bounds; the objective's default box when unset.
    std::optional<double> init_lo;
    std::optional<double> init_hi;

    void validate() const;
};

struct SweepResult {
    std::string axis_value;
    double success_rate = 0.0;
    /// NaN when averaging over successful runs only and none succeeded.
    double mean_iterations = 0.0;
    int m_runs = 0;
    std::uint64_t seed = 0;
    std::vector<RunRecord> runs;
};

/// Seed of run `run_index` within an experiment seeded with `base_seed`.
std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run_index);

/// For each axis value, M seeded runs aggregated in (axis, run) order.
/// Output is identical for any worker count.
std::vector<SweepResult> run_experiment(const ExperimentSpec& spec,
                                        std::size_t workers);

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

/// Header `axis,success_rate,mean_iterations,m_runs,seed` and one row per
/// result.
std::string format_csv(const std::vector<SweepResult>& results);
void emit_csv(const std::vector<SweepResult>& results,
              const std::filesystem::path& path);

/// Writes `text` to `path`, creating parent directories. Throws
/// std::runtime_error naming the path on failure.
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Thrown for malformed configs; the message names the key and its source.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Keys accepted in config files and as CLI overrides.
const std::vector<std::string>& config_keys();

/// Flat `key = value` text (`#` starts a comment) merged with `overrides`,
/// which win. Missing keys keep the benchmark defaults.
ExperimentSpec parse_config(std::string_view text,
                            const std::map<std::string, std::string>& overrides = {});
ExperimentSpec parse_config_file(const std::filesystem::path& path,
                                 const std::map<std::string, std::string>& overrides = {});

/// One named experiment of a preset; `file` is the CSV name in the output
/// directory.
struct PresetExperiment {
    std::string file;
    ExperimentSpec spec;
};

std::vector<std::string> preset_names();
/// Experiments for test1..test4. Throws std::invalid_argument otherwise.
std::vector<PresetExperiment> make_preset(const std::string& name);

/// Defaults of the 1D validation experiment.
ValidationConfig validation_preset();

/// `N,error` rows.
std::string format_convergence_csv(const ConvergenceResult& result);
/// `x_center,f_numeric,f_exact` rows.
std::string format_density_csv(const DensityGrid& grid, double t);

}  // namespace kbo
