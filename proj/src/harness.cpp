#include "kbo/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "kbo/objectives.hpp"
#include "kbo/parallel.hpp"

namespace kbo {

std::string to_string(SweepKind kind)
{
    switch (kind) {
    case SweepKind::none:
        return "none";
    case SweepKind::gamma:
        return "gamma";
    case SweepKind::sigma:
        return "sigma";
    case SweepKind::dim:
        return "dim";
    case SweepKind::objective:
        return "objective";
    }
    return "none";
}

SweepKind parse_sweep_kind(const std::string& text)
{
    for (SweepKind k : {SweepKind::none, SweepKind::gamma, SweepKind::sigma,
                        SweepKind::dim, SweepKind::objective}) {
        if (text == to_string(k)) {
            return k;
        }
    }
    throw std::invalid_argument("sweep must be one of none, gamma, sigma, dim, "
                                "objective; got '" + text + "'");
}

std::size_t SweepAxis::size() const noexcept
{
    switch (kind) {
    case SweepKind::none:
        return 1;
    case SweepKind::objective:
        return names.size();
    default:
        return values.size();
    }
}

std::string SweepAxis::label(std::size_t i) const
{
    switch (kind) {
    case SweepKind::none:
        return "none";
    case SweepKind::objective:
        return names.at(i);
    default:
        return format_number(values.at(i));
    }
}

void ExperimentSpec::validate() const
{
    if (m_runs < 1) {
        throw std::invalid_argument("m_runs must be >= 1");
    }
    if (axis.size() == 0) {
        throw std::invalid_argument("sweep '" + to_string(axis.kind) + "' has no values");
    }
    if (axis.kind == SweepKind::objective) {
        for (const auto& name : axis.names) {
            make_objective(name, 1);
        }
    } else {
        make_objective(objective, 1);
    }
    for (double v : axis.values) {
        if (axis.kind == SweepKind::dim && (v < 1.0 || v != std::floor(v))) {
            throw std::invalid_argument("dim sweep values must be positive integers");
        }
        if ((axis.kind == SweepKind::gamma || axis.kind == SweepKind::sigma)
            && !(v >= 0.0)) {
            throw std::invalid_argument(to_string(axis.kind)
                                        + " sweep values must be >= 0");
        }
    }
    if (init_lo.has_value() != init_hi.has_value()) {
        throw std::invalid_argument("init_lo and init_hi must be given together");
    }
    if (init_lo && !(*init_lo < *init_hi)) {
        throw std::invalid_argument("init_lo must be < init_hi");
    }
    KboConfig probe = base;
    probe.init_box.reset();
    probe.validate();
}

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run_index)
{
    return mix_seed(base_seed, run_index);
}

namespace {

struct AxisPoint {
    Objective objective;
    KboConfig config;
};

AxisPoint make_axis_point(const ExperimentSpec& spec, std::size_t a)
{
    KboConfig cfg = spec.base;
    std::string name = spec.objective;
    switch (spec.axis.kind) {
    case SweepKind::none:
        break;
    case SweepKind::gamma:
        cfg.gamma = spec.axis.values[a];
        break;
    case SweepKind::sigma:
        cfg.sigma = spec.axis.values[a];
        break;
    case SweepKind::dim:
        cfg.dim = static_cast<std::size_t>(spec.axis.values[a]);
        break;
    case SweepKind::objective:
        name = spec.axis.names[a];
        break;
    }
    Objective obj = make_objective(name, cfg.dim);
    if (spec.init_lo) {
        cfg.init_box = Box::cube(*spec.init_lo, *spec.init_hi, cfg.dim);
    } else {
        cfg.init_box = obj.init_box;
    }
    cfg.validate();
    return {std::move(obj), std::move(cfg)};
}

}  // namespace

std::vector<SweepResult> run_experiment(const ExperimentSpec& spec,
                                        std::size_t workers)
{
    spec.validate();
    std::size_t const n_axis = spec.axis.size();
    auto const m = static_cast<std::size_t>(spec.m_runs);

    std::vector<AxisPoint> points;
    points.reserve(n_axis);
    for (std::size_t a = 0; a < n_axis; ++a) {
        points.push_back(make_axis_point(spec, a));
    }

    std::vector<RunRecord> records(n_axis * m);
    parallel_for(records.size(), workers, [&](std::size_t task) {
        std::size_t const a = task / m;
        std::size_t const r = task % m;
        KboConfig cfg = points[a].config;
        cfg.seed = run_seed(spec.base_seed, r);
        records[task] = run(points[a].objective, cfg);
    });

    std::vector<SweepResult> results;
    results.reserve(n_axis);
    for (std::size_t a = 0; a < n_axis; ++a) {
        SweepResult res;
        res.axis_value = spec.axis.label(a);
        res.m_runs = spec.m_runs;
        res.seed = spec.base_seed;
        int successes = 0;
        double iter_sum = 0.0;
        int iter_count = 0;
        for (std::size_t r = 0; r < m; ++r) {
            RunRecord& rec = records[a * m + r];
            successes += rec.success ? 1 : 0;
            if (!spec.iters_success_only || rec.success) {
                iter_sum += rec.iterations_used;
                ++iter_count;
            }
            res.runs.push_back(std::move(rec));
        }
        res.success_rate = static_cast<double>(successes) / static_cast<double>(m);
        res.mean_iterations = iter_count > 0
                                  ? iter_sum / iter_count
                                  : std::numeric_limits<double>::quiet_NaN();
        results.push_back(std::move(res));
    }
    return results;
}

std::string format_number(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string format_csv(const std::vector<SweepResult>& results)
{
    std::string out = "axis,success_rate,mean_iterations,m_runs,seed\n";
    for (const SweepResult& r : results) {
        out += r.axis_value;
        out += ',';
        out += format_number(r.success_rate);
        out += ',';
        out += format_number(r.mean_iterations);
        out += ',';
        out += std::to_string(r.m_runs);
        out += ',';
        out += std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    file.write(text.data(), static_cast<std::streamsize>(text.size()));
    file.close();
    if (!file) {
        throw std::runtime_error("failed writing '" + path.string() + "'");
    }
}

void emit_csv(const std::vector<SweepResult>& results,
              const std::filesystem::path& path)
{
    write_text_file(path, format_csv(results));
}

//---------------------------------------------------------------------------//
// Config parsing
//---------------------------------------------------------------------------//

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = {
        "objective",   "dim",        "nu",           "sigma",
        "gamma",       "alpha",      "beta",         "dt",
        "n_t",         "n_particles", "diffusion_mode", "delta_stall",
        "j_stall",     "stall_mode", "seed",         "init_lo",
        "init_hi",     "noise_clip", "m_runs",       "sweep",
        "sweep_values", "output",    "iters_success_only",
    };
    return keys;
}

namespace {

std::string trim(std::string_view s)
{
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r");
    std::string out(s.substr(first, last - first + 1));
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') {
        out = out.substr(1, out.size() - 2);
    }
    return out;
}

double to_double(const std::string& text)
{
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw std::invalid_argument("expected a finite number, got '" + text + "'");
    }
    return value;
}

long long to_integer(const std::string& text)
{
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("expected an integer, got '" + text + "'");
    }
    return value;
}

std::uint64_t to_unsigned(const std::string& text)
{
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("expected a non-negative integer, got '" + text + "'");
    }
    return value;
}

bool to_bool(const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no") {
        return false;
    }
    throw std::invalid_argument("expected true or false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            throw std::invalid_argument("empty entry in list '" + text + "'");
        }
        items.push_back(item);
    }
    return items;
}

void require(bool ok, const char* message)
{
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

struct Setting {
    std::string value;
    std::string source;
};

void apply_setting(ExperimentSpec& spec, std::string& sweep_values,
                   const std::string& key, const std::string& v)
{
    KboConfig& c = spec.base;
    if (key == "objective") {
        make_objective(v, 1);
        spec.objective = v;
    } else if (key == "dim") {
        auto const d = to_integer(v);
        require(d >= 1, "must be >= 1");
        c.dim = static_cast<std::size_t>(d);
    } else if (key == "nu") {
        c.nu = to_double(v);
        require(c.nu >= 0.0, "must be >= 0");
    } else if (key == "sigma") {
        c.sigma = to_double(v);
        require(c.sigma >= 0.0, "must be >= 0");
    } else if (key == "gamma") {
        c.gamma = to_double(v);
        require(c.gamma >= 0.0, "must be >= 0");
    } else if (key == "alpha") {
        c.alpha = to_double(v);
        require(c.alpha > 0.0 && c.alpha <= 2.0, "must lie in (0, 2]");
    } else if (key == "beta") {
        c.beta = to_double(v);
        require(c.beta > 0.0, "must be > 0");
    } else if (key == "dt") {
        c.dt = to_double(v);
        require(c.dt > 0.0, "must be > 0");
    } else if (key == "n_t") {
        auto const n = to_integer(v);
        require(n >= 1 && n <= std::numeric_limits<int>::max(), "must be >= 1");
        c.n_t = static_cast<int>(n);
    } else if (key == "n_particles") {
        auto const n = to_integer(v);
        require(n >= 1, "must be >= 1");
        c.n_particles = static_cast<std::size_t>(n);
    } else if (key == "diffusion_mode") {
        c.diffusion_mode = parse_diffusion_mode(v);
    } else if (key == "delta_stall") {
        c.delta_stall = to_double(v);
        require(c.delta_stall >= 0.0, "must be >= 0");
    } else if (key == "j_stall") {
        auto const n = to_integer(v);
        require(n >= 1 && n <= std::numeric_limits<int>::max(), "must be >= 1");
        c.j_stall = static_cast<int>(n);
    } else if (key == "stall_mode") {
        c.stall_mode = parse_stall_mode(v);
    } else if (key == "seed") {
        spec.base_seed = to_unsigned(v);
    } else if (key == "init_lo") {
        spec.init_lo = to_double(v);
    } else if (key == "init_hi") {
        spec.init_hi = to_double(v);
    } else if (key == "noise_clip") {
        if (v == "none") {
            c.noise_clip.reset();
        } else {
            c.noise_clip = to_double(v);
            require(*c.noise_clip > 0.0, "must be > 0");
        }
    } else if (key == "m_runs") {
        auto const m = to_integer(v);
        require(m >= 1 && m <= std::numeric_limits<int>::max(), "must be >= 1");
        spec.m_runs = static_cast<int>(m);
    } else if (key == "sweep") {
        spec.axis.kind = parse_sweep_kind(v);
    } else if (key == "sweep_values") {
        sweep_values = v;
    } else if (key == "output") {
        spec.output = v;
    } else if (key == "iters_success_only") {
        spec.iters_success_only = to_bool(v);
    } else {
        throw std::invalid_argument("unknown key");
    }
}

}  // namespace

ExperimentSpec parse_config(std::string_view text,
                            const std::map<std::string, std::string>& overrides)
{
    auto const& keys = config_keys();
    auto known = [&](const std::string& key) {
        return std::find(keys.begin(), keys.end(), key) != keys.end();
    };

    std::map<std::string, Setting> settings;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string const where = "line " + std::to_string(line_no);
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        auto const eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected 'key = value'");
        }
        std::string const key = trim(std::string_view(line).substr(0, eq));
        std::string const value = trim(std::string_view(line).substr(eq + 1));
        if (!known(key)) {
            throw ConfigError("unknown key '" + key + "' (" + where + ")");
        }
        if (settings.count(key)) {
            throw ConfigError("duplicate key '" + key + "' (" + where + ")");
        }
        settings[key] = {value, where};
    }
    for (const auto& [key, value] : overrides) {
        if (!known(key)) {
            throw ConfigError("unknown key '" + key + "' (flag --" + key + ")");
        }
        settings[key] = {value, "flag --" + key};
    }

    ExperimentSpec spec;
    std::string sweep_values;
    std::string sweep_values_source;
    for (const auto& [key, setting] : settings) {
        try {
            apply_setting(spec, sweep_values, key, setting.value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("key '" + key + "' (" + setting.source + "): " + e.what());
        }
        if (key == "sweep_values") {
            sweep_values_source = setting.source;
        }
    }

    try {
        if (spec.axis.kind == SweepKind::none) {
            if (!sweep_values.empty()) {
                throw std::invalid_argument("given without a sweep axis");
            }
        } else {
            if (sweep_values.empty()) {
                throw std::invalid_argument("required by sweep = "
                                            + to_string(spec.axis.kind));
            }
            for (const auto& item : split_list(sweep_values)) {
                if (spec.axis.kind == SweepKind::objective) {
                    make_objective(item, 1);
                    spec.axis.names.push_back(item);
                } else {
                    spec.axis.values.push_back(to_double(item));
                }
            }
        }
    } catch (const std::invalid_argument& e) {
        std::string const src =
            sweep_values_source.empty() ? "" : " (" + sweep_values_source + ")";
        throw ConfigError("key 'sweep_values'" + src + ": " + e.what());
    }

    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid experiment: ") + e.what());
    }
    return spec;
}

ExperimentSpec parse_config_file(const std::filesystem::path& path,
                                 const std::map<std::string, std::string>& overrides)
{
    std::ifstream file(path);
    if (!file) {
        throw ConfigError("cannot read config file '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str(), overrides);
}

//---------------------------------------------------------------------------//
// Presets
//---------------------------------------------------------------------------//

namespace {

ExperimentSpec preset_base()
{
    ExperimentSpec spec;
    spec.objective = "rastrigin";
    spec.base = KboConfig{};
    spec.m_runs = 20;
    spec.base_seed = 1;
    return spec;
}

std::vector<double> grid(double from, double to, double step)
{
    std::vector<double> out;
    auto const n = static_cast<int>(std::lround((to - from) / step));
    for (int i = 0; i <= n; ++i) {
        out.push_back(from + step * i);
    }
    return out;
}

std::string regime_tag(double gamma, double sigma)
{
    return "gamma" + format_number(gamma) + "_sigma" + format_number(sigma);
}

}  // namespace

std::vector<std::string> preset_names()
{
    return {"test1", "test2", "test3", "test4", "validate"};
}

std::vector<PresetExperiment> make_preset(const std::string& name)
{
    std::vector<PresetExperiment> out;
    if (name == "test1") {
        for (double sigma : {0.0, 3.0}) {
            ExperimentSpec spec = preset_base();
            spec.base.dim = 20;
            spec.base.sigma = sigma;
            spec.axis = {SweepKind::gamma, grid(1.0, 5.0, 0.5), {}};
            out.push_back({"test1_sigma" + format_number(sigma) + ".csv", spec});
        }
    } else if (name == "test2") {
        for (auto [gamma, sigma] : {std::pair{2.0, 0.0}, {0.0, 3.0}, {2.0, 3.0}}) {
            ExperimentSpec spec = preset_base();
            spec.base.gamma = gamma;
            spec.base.sigma = sigma;
            spec.axis = {SweepKind::dim, {1, 2, 5, 10, 15, 20, 30, 40, 50}, {}};
            out.push_back({"test2_" + regime_tag(gamma, sigma) + ".csv", spec});
        }
    } else if (name == "test3") {
        for (double gamma : {0.0, 2.0}) {
            ExperimentSpec spec = preset_base();
            spec.base.dim = 20;
            spec.base.gamma = gamma;
            spec.axis = {SweepKind::sigma, grid(0.0, 6.0, 0.5), {}};
            out.push_back({"test3_gamma" + format_number(gamma) + ".csv", spec});
        }
    } else if (name == "test4") {
        std::vector<std::pair<std::string, std::vector<std::string>>> const suites = {
            {"diff", {"rastrigin", "rosenbrock", "ackley", "sphere"}},
            {"nondiff", {"modified_alpine", "l1_norm"}},
        };
        for (const auto& [suite, names] : suites) {
            for (auto [gamma, sigma] : {std::pair{0.0, 3.0}, {2.0, 0.0}, {2.0, 3.0}}) {
                ExperimentSpec spec = preset_base();
                spec.base.dim = 20;
                spec.base.gamma = gamma;
                spec.base.sigma = sigma;
                spec.axis = {SweepKind::objective, {}, names};
                out.push_back({"test4_" + suite + "_" + regime_tag(gamma, sigma) + ".csv",
                               spec});
            }
        }
    } else {
        throw std::invalid_argument("unknown preset '" + name
                                    + "' (expected test1, test2, test3 or test4)");
    }
    return out;
}

ValidationConfig validation_preset()
{
    return ValidationConfig{};
}

std::string format_convergence_csv(const ConvergenceResult& result)
{
    std::string out = "N,error\n";
    for (const auto& p : result.points) {
        out += std::to_string(p.n_particles) + "," + format_number(p.error) + "\n";
    }
    return out;
}

std::string format_density_csv(const DensityGrid& grid, double t)
{
    std::string out = "x_center,f_numeric,f_exact\n";
    for (std::size_t k = 0; k < grid.values.size(); ++k) {
        double const x = grid.center(k);
        out += format_number(x) + "," + format_number(grid.values[k]) + ","
               + format_number(exact_solution(x, t)) + "\n";
    }
    return out;
}

}  // namespace kbo
