#include "kbo/harness.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

namespace kbo {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name)
{
    fs::path const dir = fs::temp_directory_path() / ("kbo_harness_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ExperimentSpec sphere_spec()
{
    ExperimentSpec spec;
    spec.objective = "sphere";
    spec.base.dim = 2;
    spec.base.nu = 1.0;
    spec.base.sigma = 1.0;
    spec.base.gamma = 0.0;
    spec.base.beta = 1e5;
    spec.base.diffusion_mode = DiffusionMode::isotropic;
    spec.init_lo = 1.0;
    spec.init_hi = 2.0;
    spec.m_runs = 20;
    return spec;
}

//---------------------------------------------------------------------------//
// Config parsing
//---------------------------------------------------------------------------//

TEST(ParseConfigTest, empty_gives_defaults)
{
    ExperimentSpec const spec = parse_config("");
    KboConfig const defaults;
    EXPECT_EQ(spec.objective, "rastrigin");
    EXPECT_EQ(spec.m_runs, 20);
    EXPECT_EQ(spec.base.n_particles, defaults.n_particles);
    EXPECT_EQ(spec.base.beta, 5e6);
    EXPECT_EQ(spec.base.dt, 0.1);
    EXPECT_EQ(spec.base.alpha, 1.5);
    EXPECT_EQ(spec.axis.kind, SweepKind::none);
}

TEST(ParseConfigTest, values_comments_and_overrides)
{
    std::string const text =
        "# experiment\n"
        "objective = sphere\n"
        "dim = 3   # small\n"
        "gamma = 2.5\n"
        "dt = 0.1\n"
        "sweep = sigma\n"
        "sweep_values = 0, 0.5,1\n"
        "diffusion_mode = isotropic\n";
    ExperimentSpec const spec = parse_config(text, {{"dt", "0.05"}});
    EXPECT_EQ(spec.objective, "sphere");
    EXPECT_EQ(spec.base.dim, 3u);
    EXPECT_EQ(spec.base.gamma, 2.5);
    EXPECT_EQ(spec.base.dt, 0.05);
    EXPECT_EQ(spec.base.diffusion_mode, DiffusionMode::isotropic);
    EXPECT_EQ(spec.axis.kind, SweepKind::sigma);
    EXPECT_EQ(spec.axis.values, (std::vector<double>{0.0, 0.5, 1.0}));
}

TEST(ParseConfigTest, errors_name_key_and_source)
{
    auto message = [](const std::string& text,
                      const std::map<std::string, std::string>& overrides = {}) {
        try {
            parse_config(text, overrides);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    std::string m = message("gamma = -1\n");
    EXPECT_NE(m.find("gamma"), std::string::npos) << m;
    EXPECT_NE(m.find("line 1"), std::string::npos) << m;

    m = message("dim = 2\nbogus = 3\n");
    EXPECT_NE(m.find("bogus"), std::string::npos) << m;
    EXPECT_NE(m.find("line 2"), std::string::npos) << m;

    m = message("dt = fast\n");
    EXPECT_NE(m.find("dt"), std::string::npos) << m;

    m = message("", {{"n_t", "-4"}});
    EXPECT_NE(m.find("flag --n_t"), std::string::npos) << m;

    m = message("dt = 0.1\ndt = 0.2\n");
    EXPECT_NE(m.find("duplicate"), std::string::npos) << m;

    EXPECT_NE(message("sweep = gamma\n"), "no error");
    EXPECT_NE(message("sweep_values = 1,2\n"), "no error");
    EXPECT_NE(message("m_runs = 0\n"), "no error");
    EXPECT_NE(message("sweep = objective\nsweep_values = sphere,nope\n"), "no error");
    EXPECT_NE(message("dt = 2\n"), "no error");
    EXPECT_NE(message("no equals sign\n"), "no error");
}

TEST(ParseConfigTest, file_roundtrip)
{
    fs::path const dir = scratch_dir("config");
    fs::path const file = dir / "exp.cfg";
    write_text_file(file, "objective = l1_norm\nm_runs = 3\n");
    ExperimentSpec const spec = parse_config_file(file);
    EXPECT_EQ(spec.objective, "l1_norm");
    EXPECT_EQ(spec.m_runs, 3);
    EXPECT_THROW(parse_config_file(dir / "missing.cfg"), ConfigError);
}

//---------------------------------------------------------------------------//
// CSV output
//---------------------------------------------------------------------------//

TEST(CsvTest, header_only_for_empty_results)
{
    EXPECT_EQ(format_csv({}), "axis,success_rate,mean_iterations,m_runs,seed\n");
}

TEST(CsvTest, single_row)
{
    SweepResult r;
    r.axis_value = "2";
    r.success_rate = 0.85;
    r.mean_iterations = 1234.5;
    r.m_runs = 20;
    r.seed = 42;
    fs::path const path = scratch_dir("csv") / "nested" / "out.csv";
    emit_csv({r}, path);
    EXPECT_EQ(read_file(path),
              "axis,success_rate,mean_iterations,m_runs,seed\n2,0.85,1234.5,20,42\n");
}

TEST(CsvTest, number_formatting)
{
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(3.0), "3");
    EXPECT_EQ(format_number(std::nan("")), "nan");
    double const third = 1.0 / 3.0;
    EXPECT_EQ(std::stod(format_number(third)), third);
}

//---------------------------------------------------------------------------//
// Experiments
//---------------------------------------------------------------------------//

TEST(RunExperimentTest, single_run)
{
    ExperimentSpec spec = sphere_spec();
    spec.m_runs = 1;
    auto const results = run_experiment(spec, 1);
    ASSERT_EQ(results.size(), 1u);
    EXPECT_EQ(results[0].axis_value, "none");
    EXPECT_EQ(results[0].m_runs, 1);
    ASSERT_EQ(results[0].runs.size(), 1u);
    double const rate = results[0].success_rate;
    EXPECT_TRUE(rate == 0.0 || rate == 1.0);
    EXPECT_EQ(results[0].mean_iterations, results[0].runs[0].iterations_used);
}

TEST(RunExperimentTest, sphere_sanity)
{
    auto const results = run_experiment(sphere_spec(), 4);
    ASSERT_EQ(results.size(), 1u);
    EXPECT_GE(results[0].success_rate, 0.95);
}

TEST(RunExperimentTest, aggregates_match_runs)
{
    ExperimentSpec spec = sphere_spec();
    spec.m_runs = 6;
    spec.axis = {SweepKind::gamma, {0.0, 0.5}, {}};
    spec.iters_success_only = true;
    auto const results = run_experiment(spec, 3);
    ASSERT_EQ(results.size(), 2u);
    for (const auto& r : results) {
        int successes = 0;
        double iters = 0.0;
        for (const auto& run : r.runs) {
            if (run.success) {
                ++successes;
                iters += static_cast<double>(run.iterations_used);
            }
        }
        EXPECT_DOUBLE_EQ(r.success_rate, successes / 6.0);
        if (successes > 0) {
            EXPECT_DOUBLE_EQ(r.mean_iterations, iters / successes);
        } else {
            EXPECT_TRUE(std::isnan(r.mean_iterations));
        }
    }
    EXPECT_EQ(results[0].axis_value, "0");
    EXPECT_EQ(results[1].axis_value, "0.5");
}

TEST(RunExperimentTest, worker_count_does_not_change_output)
{
    ExperimentSpec spec;
    spec.objective = "rastrigin";
    spec.base.dim = 4;
    spec.base.n_t = 150;
    spec.base.n_particles = 40;
    spec.m_runs = 5;
    spec.axis = {SweepKind::dim, {1, 3}, {}};
    std::string const one = format_csv(run_experiment(spec, 1));
    EXPECT_EQ(format_csv(run_experiment(spec, 2)), one);
    EXPECT_EQ(format_csv(run_experiment(spec, 7)), one);

    spec.base_seed = 2;
    EXPECT_NE(format_csv(run_experiment(spec, 1)), one);
}

TEST(RunExperimentTest, common_seeds_across_axis)
{
    EXPECT_NE(run_seed(1, 0), run_seed(1, 1));
    EXPECT_NE(run_seed(1, 0), run_seed(2, 0));
    ExperimentSpec spec = sphere_spec();
    spec.m_runs = 2;
    spec.axis = {SweepKind::sigma, {1.0, 1.0}, {}};
    auto const results = run_experiment(spec, 2);
    EXPECT_EQ(results[0].runs[1].final_consensus, results[1].runs[1].final_consensus);
}

//---------------------------------------------------------------------------//
// Presets
//---------------------------------------------------------------------------//

TEST(PresetTest, grids)
{
    auto const t1 = make_preset("test1");
    ASSERT_EQ(t1.size(), 2u);
    EXPECT_EQ(t1[0].file, "test1_sigma0.csv");
    EXPECT_EQ(t1[1].file, "test1_sigma3.csv");
    EXPECT_EQ(t1[0].spec.axis.kind, SweepKind::gamma);
    EXPECT_EQ(t1[0].spec.axis.values,
              (std::vector<double>{1, 1.5, 2, 2.5, 3, 3.5, 4, 4.5, 5}));
    EXPECT_EQ(t1[1].spec.base.sigma, 3.0);

    auto const t2 = make_preset("test2");
    ASSERT_EQ(t2.size(), 3u);
    EXPECT_EQ(t2[0].file, "test2_gamma2_sigma0.csv");
    EXPECT_EQ(t2[0].spec.axis.values,
              (std::vector<double>{1, 2, 5, 10, 15, 20, 30, 40, 50}));

    auto const t3 = make_preset("test3");
    ASSERT_EQ(t3.size(), 2u);
    EXPECT_EQ(t3[0].spec.axis.values.size(), 13u);
    EXPECT_EQ(t3[0].spec.axis.values.back(), 6.0);

    auto const t4 = make_preset("test4");
    ASSERT_EQ(t4.size(), 6u);
    EXPECT_EQ(t4[0].spec.axis.kind, SweepKind::objective);

    for (const auto& name : {"test1", "test2", "test3", "test4"}) {
        for (const auto& exp : make_preset(name)) {
            EXPECT_NO_THROW(exp.spec.validate()) << exp.file;
            EXPECT_EQ(exp.spec.m_runs, 20);
            EXPECT_EQ(exp.spec.base.n_particles, 200u);
            EXPECT_EQ(exp.spec.base.beta, 5e6);
            EXPECT_EQ(exp.spec.base.n_t, 10000);
            EXPECT_EQ(exp.spec.base.alpha, 1.5);
        }
    }
    EXPECT_THROW(make_preset("test9"), std::invalid_argument);

    ValidationConfig const v = validation_preset();
    EXPECT_EQ(v.alpha, 1.0);
    EXPECT_EQ(v.dt, 0.01);
    EXPECT_EQ(v.t_final, 2.0);
    EXPECT_EQ(v.grid.m_x, 1024u);
}

TEST(PresetTest, validation_csv_layout)
{
    DensityGrid grid;
    grid.m_x = 2;
    grid.values = {0.5, 0.25};
    std::string const csv = format_density_csv(grid, 0.0);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "x_center,f_numeric,f_exact");
    ConvergenceResult r;
    r.points = {{1000, 0.5}};
    EXPECT_EQ(format_convergence_csv(r), "N,error\n1000,0.5\n");
}

//---------------------------------------------------------------------------//
// Command line
//---------------------------------------------------------------------------//

int run_cli(const std::string& args, const fs::path& capture)
{
    std::string const cmd =
        std::string(KBO_CLI_PATH) + " " + args + " > " + capture.string() + " 2>&1";
    int const status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliTest, run_prints_csv)
{
    fs::path const dir = scratch_dir("cli_run");
    fs::path const out = dir / "stdout.txt";
    ASSERT_EQ(run_cli("--workers 2 run --objective sphere --dim 2 --m_runs 2 --n_t 50 "
                      "--sweep gamma --sweep_values 0,1",
                      out),
              0)
        << read_file(out);
    std::string const text = read_file(out);
    EXPECT_EQ(text.rfind("axis,success_rate,mean_iterations,m_runs,seed\n", 0), 0u) << text;
    EXPECT_NE(text.find("\n0,"), std::string::npos);
    EXPECT_NE(text.find("\n1,"), std::string::npos);
}

TEST(CliTest, config_file_and_output)
{
    fs::path const dir = scratch_dir("cli_cfg");
    write_text_file(dir / "exp.cfg", "objective = sphere\ndim = 2\nm_runs = 2\nn_t = 30\n");
    fs::path const log = dir / "log.txt";
    ASSERT_EQ(run_cli("run --config " + (dir / "exp.cfg").string() + " --output "
                          + (dir / "res" / "o.csv").string(),
                      log),
              0)
        << read_file(log);
    EXPECT_TRUE(fs::exists(dir / "res" / "o.csv"));
}

TEST(CliTest, errors_exit_nonzero)
{
    fs::path const dir = scratch_dir("cli_err");
    fs::path const out = dir / "out.txt";
    EXPECT_EQ(run_cli("run --gamma -1", out), 1);
    EXPECT_NE(read_file(out).find("gamma"), std::string::npos);
    EXPECT_NE(run_cli("preset nope", out), 0);
    EXPECT_NE(run_cli("", out), 0);
}

TEST(CliTest, constants_and_validate)
{
    fs::path const dir = scratch_dir("cli_misc");
    fs::path const out = dir / "out.txt";
    ASSERT_EQ(run_cli("constants --d 1 --p 1.2 --alpha 1.5 --nu 1 --gamma 0", out), 0);
    std::string const text = read_file(out);
    EXPECT_NE(text.find("B_p_alpha=2.68099642957"), std::string::npos) << text;
    EXPECT_NE(text.find("C_p_alpha=1.2"), std::string::npos) << text;

    ASSERT_EQ(run_cli("validate --n 2000 --times 0,2 --convergence 500,1000,2000 --output-dir "
                          + (dir / "v").string(),
                      out),
              0)
        << read_file(out);
    EXPECT_TRUE(fs::exists(dir / "v" / "density_t0.csv"));
    EXPECT_TRUE(fs::exists(dir / "v" / "density_t2.csv"));
    EXPECT_EQ(read_file(dir / "v" / "convergence.csv").rfind("N,error\n", 0), 0u);
}

}  // namespace
}  // namespace kbo
