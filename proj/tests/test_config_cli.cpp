#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cldnn/config_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cldnn;
namespace fs = std::filesystem;

namespace {

// Runs the installed CLI binary, capturing stdout+stderr; returns the exit
// code (or -1 if the child did not exit normally).
int run_cli(const std::string& args, std::string* output = nullptr) {
    const fs::path log = fs::temp_directory_path() / "cldnn_cli_test_output.txt";
    const std::string cmd = std::string(CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (output) {
        std::ifstream in(log);
        std::ostringstream buf;
        buf << in.rdbuf();
        *output = buf.str();
    }
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config dump round-trips through the parser") {
    ExperimentConfig config;
    config.plant = "f2";
    config.trajectory = TrajectoryKind::Sinusoidal;
    config.law = ControlLaw::CL2;
    config.duration = 42.5;
    config.gamma2 = 0.0075;
    config.seed = 13;
    config.dither_phase = 0.25;
    config.q0 << -0.3, 0.9;

    const ExperimentConfig back = parse_config(dump_config(config));
    CHECK(back.plant == config.plant);
    CHECK(back.trajectory == config.trajectory);
    CHECK(back.law == config.law);
    CHECK(back.duration == config.duration);
    CHECK(back.gamma2 == config.gamma2);  // bitwise via max_digits10
    CHECK(back.seed == config.seed);
    CHECK(back.dither_phase == config.dither_phase);
    CHECK((back.q0 - config.q0).norm() == 0.0);
    // A second dump is textually identical: the format is canonical.
    CHECK(dump_config(back) == dump_config(config));
}

TEST_CASE("parser accepts comments and blank lines and reports bad fields") {
    const ExperimentConfig c = parse_config("# comment\n\nplant = f2\n  k1 = 17.5  \n");
    CHECK(c.plant == "f2");
    CHECK(c.k1 == 17.5);

    CHECK_THROWS_WITH_AS(parse_config("k_one = 40\n"), doctest::Contains("k_one"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("k1 = forty\n"), doctest::Contains("k1"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("stack_capacity = 2.5\n"),
                         doctest::Contains("stack_capacity"), ConfigError);
    CHECK_THROWS_AS(parse_config("just a line without equals\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/path.conf"), ConfigError);
}

TEST_CASE("shipped example config parses to the benchmark defaults") {
    const ExperimentConfig example = load_config(CONFIG_EXAMPLE_PATH);
    const ExperimentConfig defaults;
    CHECK(example.plant == defaults.plant);
    CHECK(example.duration == defaults.duration);
    CHECK(example.alpha1 == defaults.alpha1);
    CHECK(example.alpha2 == defaults.alpha2);
    CHECK(example.k1 == defaults.k1);
    CHECK(example.gamma1 == defaults.gamma1);
    CHECK(example.gamma2 == defaults.gamma2);
    CHECK(example.gamma3 == defaults.gamma3);
    CHECK(example.stack_capacity == defaults.stack_capacity);
    CHECK((example.q0 - defaults.q0).norm() < 1e-12);
    example.validate();
}

TEST_CASE("cli rejects unknown plants and laws with exit code 2") {
    CHECK(run_cli("run --plant f3 --duration 1") == 2);
    CHECK(run_cli("run --law pid --duration 1") == 2);
    CHECK(run_cli("definitely-not-a-verb") == 2);
}

TEST_CASE("cli run produces csv, fapprox series, and json summary") {
    const fs::path out = fresh_dir("cldnn_cli_run");
    std::string text;
    const int code =
        run_cli("run --duration 1 --law cl1 --seed 4 --out " + out.string(), &text);
    CHECK(code == 0);
    CHECK(text.find("rms_e=") != std::string::npos);

    const std::string stem = "run_f1_circular_cl1_seed4";
    CHECK(fs::exists(out / (stem + ".csv")));
    CHECK(fs::exists(out / (stem + "_fapprox.csv")));
    CHECK(fs::exists(out / (stem + ".json")));

    std::ifstream csv(out / (stem + ".csv"));
    std::string header;
    std::getline(csv, header);
    CHECK(header == run_csv_header());
}

TEST_CASE("cli honors config files with flag overrides on top") {
    const fs::path out = fresh_dir("cldnn_cli_config");
    const fs::path conf = out / "base.conf";
    {
        ExperimentConfig config;
        config.duration = 1.0;
        config.plant = "f2";
        std::ofstream(conf) << dump_config(config);
    }
    std::string text;
    const int code = run_cli("run --config " + conf.string() + " --traj sinusoidal --out " +
                                 out.string(),
                             &text);
    CHECK(code == 0);
    CHECK(fs::exists(out / "run_f2_sinusoidal_cl1_seed1.json"));
}

TEST_CASE("CLDNN_SEED is the fallback seed") {
    const fs::path out = fresh_dir("cldnn_cli_envseed");
    CHECK(run_cli("run --duration 0.5 --out " + out.string(), nullptr) == 0);
    CHECK(fs::exists(out / "run_f1_circular_cl1_seed1.json"));  // default seed

    const std::string cmd = "CLDNN_SEED=9 " + std::string(CLI_PATH) +
                            " run --duration 0.5 --out " + out.string() + " > /dev/null 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(out / "run_f1_circular_cl1_seed9.json"));  // env fallback
}

TEST_CASE("cli dump-config emits a parseable effective config") {
    std::string text;
    CHECK(run_cli("run --dump-config --plant f2 --seed 11", &text) == 0);
    const ExperimentConfig config = parse_config(text);
    CHECK(config.plant == "f2");
    CHECK(config.seed == 11);
}

TEST_CASE("short grid emits 12 summary records and comparison tables") {
    const fs::path out = fresh_dir("cldnn_cli_grid");
    std::string text;
    const int code = run_cli("grid --duration 0.5 --workers 2 --out " + out.string(), &text);
    CHECK(code == 0);
    CHECK(fs::exists(out / "grid_summary.json"));
    for (const char* cell :
         {"table_f1_circular", "table_f1_sinusoidal", "table_f2_circular", "table_f2_sinusoidal"})
        CHECK(fs::exists(out / (std::string(cell) + ".json")));

    std::ifstream in(out / "grid_summary.json");
    const std::string summary((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
    std::size_t count = 0;
    for (std::size_t pos = summary.find("\"law\""); pos != std::string::npos;
         pos = summary.find("\"law\"", pos + 1))
        ++count;
    CHECK(count == 12);
}

TEST_CASE("table verb exits 2 without a baseline run") {
    const fs::path out = fresh_dir("cldnn_cli_table");
    CHECK(run_cli("run --duration 0.5 --law cl1 --out " + out.string()) == 0);
    CHECK(run_cli("table --in " + out.string() + " --out " + out.string()) == 2);
    CHECK(run_cli("run --duration 0.5 --law baseline --out " + out.string()) == 0);
    std::string text;
    CHECK(run_cli("table --in " + out.string() + " --out " + out.string(), &text) == 0);
    CHECK(text.find("rms_fapprox") != std::string::npos);
    CHECK(fs::exists(out / "table_f1_circular_1.csv"));
    CHECK(run_cli("table --in " + fresh_dir("cldnn_cli_empty").string()) == 2);
}

TEST_CASE("diagnose settling reports feasibility through exit codes") {
    std::string text;
    CHECK(run_cli("diagnose settling --k-delta 20 --lambda1 20 --z0 1 --delta-f 1 "
                  "--delta-acc 0.1",
                  &text) == 0);
    CHECK(text.find("settling_time=") != std::string::npos);
    CHECK(run_cli("diagnose settling --k-delta 1 --lambda1 1 --z0 1 --delta-f 1 "
                  "--delta-acc 0.1",
                  &text) == 1);
    CHECK(text.find("infeasible") != std::string::npos);
}

TEST_CASE("diagnose identifiability reports the stacked-Jacobian rank") {
    std::string text;
    CHECK(run_cli("diagnose identifiability --random 64 --hidden-layers 2 --neurons 2", &text) ==
          0);
    CHECK(text.find("rank=") != std::string::npos);
    CHECK(text.find("identifiable:") != std::string::npos);
}

TEST_CASE("regress demo converges on a realizable target") {
    std::string text;
    CHECK(run_cli("regress --law cl1 --duration 10 --seed 7", &text) == 0);
    CHECK(text.find("theta_err_final=") != std::string::npos);
}
