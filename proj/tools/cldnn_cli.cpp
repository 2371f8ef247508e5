#include "cldnn/config_io.hpp"
#include "cldnn/observer.hpp"
#include "cldnn/regression.hpp"
#include "cldnn/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Overrides {
    std::string config_path;
    std::string out_dir = "out";
    std::string law, plant, traj;
    int seed = -1;
    double duration = -1.0, dt = -1.0;
};

unsigned resolve_seed(int flag_seed, unsigned fallback) {
    if (flag_seed >= 0) return static_cast<unsigned>(flag_seed);
    if (const char* env = std::getenv("CLDNN_SEED")) return static_cast<unsigned>(std::atoi(env));
    return fallback;
}

cldnn::ExperimentConfig build_config(const Overrides& ov) {
    cldnn::ExperimentConfig config;
    if (!ov.config_path.empty()) config = cldnn::load_config(ov.config_path);
    if (!ov.law.empty()) config.law = cldnn::control_law_from_name(ov.law);
    if (!ov.plant.empty()) config.plant = ov.plant;
    if (!ov.traj.empty()) config.trajectory = cldnn::trajectory_from_name(ov.traj);
    if (ov.duration > 0.0) config.duration = ov.duration;
    if (ov.dt > 0.0) config.dt = ov.dt;
    config.seed = resolve_seed(ov.seed, config.seed);
    config.validate();
    return config;
}

std::string run_stem(const cldnn::ExperimentConfig& c) {
    return "run_" + c.plant + "_" + std::string(cldnn::trajectory_name(c.trajectory)) + "_" +
           cldnn::control_law_name(c.law) + "_seed" + std::to_string(c.seed);
}

cldnn::RunResult execute_run(const cldnn::ExperimentConfig& config, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    const std::string stem = run_stem(config);
    std::ofstream csv(out_dir / (stem + ".csv"));
    const cldnn::RunResult result = cldnn::run_experiment(config, &csv);

    std::ofstream fa(out_dir / (stem + "_fapprox.csv"));
    fa.precision(std::numeric_limits<double>::max_digits10);
    fa << "t,fapprox\n";
    for (std::size_t i = 0; i < result.time.size(); ++i)
        fa << result.time[i] << ',' << result.fapprox[i] << '\n';

    std::ofstream js(out_dir / (stem + ".json"));
    js << cldnn::run_json(result) << '\n';
    return result;
}

void print_summary(const cldnn::RunResult& r) {
    std::cout << r.plant << '/' << cldnn::trajectory_name(r.trajectory) << '/'
              << cldnn::control_law_name(r.law) << " seed=" << r.seed << "  rms_e=" << r.rms_e
              << "  rms_u=" << r.rms_u << "  rms_fapprox=" << r.rms_fapprox
              << "  rms_fapprox_offtraj=" << r.rms_fapprox_offtraj
              << (r.aborted ? "  [diverged]" : "") << '\n';
}

int cmd_run(const Overrides& ov, bool dump) {
    const cldnn::ExperimentConfig config = build_config(ov);
    if (dump) {
        std::cout << cldnn::dump_config(config);
        return 0;
    }
    const cldnn::RunResult result = execute_run(config, ov.out_dir);
    print_summary(result);
    return result.aborted ? 1 : 0;
}

int cmd_grid(const Overrides& ov, int workers) {
    std::vector<cldnn::ExperimentConfig> configs;
    for (const std::string& plant : {"f1", "f2"})
        for (const auto traj : {cldnn::TrajectoryKind::Circular, cldnn::TrajectoryKind::Sinusoidal})
            for (const auto law :
                 {cldnn::ControlLaw::Baseline, cldnn::ControlLaw::CL1, cldnn::ControlLaw::CL2}) {
                Overrides cell = ov;
                cell.plant = plant;
                cell.law = cldnn::control_law_name(law);
                cell.traj = cldnn::trajectory_name(traj);
                configs.push_back(build_config(cell));
            }

    std::vector<cldnn::RunResult> results(configs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < configs.size(); i = next.fetch_add(1)) {
            try {
                results[i] = execute_run(configs[i], ov.out_dir);
            } catch (const std::exception& err) {
                std::cerr << run_stem(configs[i]) << ": " << err.what() << '\n';
                failed = true;
            }
        }
    };
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int count = std::clamp(workers > 0 ? workers : hw, 1, 12);
    std::vector<std::thread> pool;
    for (int i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failed) return 1;

    bool diverged = false;
    json summary = json::array();
    for (std::size_t cell = 0; cell < configs.size(); cell += 3) {
        std::map<cldnn::ControlLaw, cldnn::RunResult> by_law;
        for (std::size_t i = cell; i < cell + 3; ++i) {
            print_summary(results[i]);
            diverged = diverged || results[i].aborted;
            by_law[results[i].law] = results[i];
        }
        const cldnn::ComparisonRecord record = cldnn::compare_table(by_law);
        const std::string stem = "table_" + record.plant + "_" +
                                 std::string(cldnn::trajectory_name(record.trajectory));
        std::ofstream(fs::path(ov.out_dir) / (stem + ".csv")) << cldnn::comparison_csv(record);
        std::ofstream(fs::path(ov.out_dir) / (stem + ".json")) << cldnn::comparison_json(record);

        const double base_on = by_law.at(cldnn::ControlLaw::Baseline).rms_fapprox;
        const double base_off = by_law.at(cldnn::ControlLaw::Baseline).rms_fapprox_offtraj;
        for (std::size_t i = cell; i < cell + 3; ++i) {
            json rec = json::parse(cldnn::run_json(results[i]));
            if (results[i].law != cldnn::ControlLaw::Baseline) {
                rec["improvement_pct"] = cldnn::improvement_pct(base_on, results[i].rms_fapprox);
                rec["improvement_pct_offtraj"] =
                    cldnn::improvement_pct(base_off, results[i].rms_fapprox_offtraj);
            }
            summary.push_back(rec);
        }
    }
    std::ofstream(fs::path(ov.out_dir) / "grid_summary.json") << summary.dump(2) << '\n';
    return diverged ? 1 : 0;
}

int cmd_regress(unsigned seed, double duration, double dt, const std::string& law_name) {
    using namespace cldnn;
    const DnnModel target = make_model(2, 2, 3, 1);
    const DnnModel model = target;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector theta_star(target.parameter_count());
    for (Eigen::Index i = 0; i < theta_star.size(); ++i) theta_star(i) = dist(rng);

    RegressionEstimator est;
    est.model = model;
    est.theta_hat = theta_star;
    for (Eigen::Index i = 0; i < est.theta_hat.size(); ++i) est.theta_hat(i) += 0.3 * dist(rng);
    est.space = SearchSpace::with_radius(10.0 * std::sqrt(double(model.parameter_count())));
    est.stack = HistoryStack(100, 5, StackMode::Regression);
    est.gamma1 = law_name == "gradient" ? 2.0 : 0.6;
    est.gamma2 = 1e-4;
    est.law = law_name == "gradient" ? RegressionLaw::Gradient
              : law_name == "cl2"    ? RegressionLaw::CL2
                                     : RegressionLaw::CL1;

    const double err0 = (est.theta_hat - theta_star).norm();
    double acc0 = 0.0, acc1 = 0.0;
    const int steps = static_cast<int>(duration / dt);
    for (int i = 0; i < steps; ++i) {
        const double t = i * dt;
        Vector x(2);
        x << std::sin(0.7 * t) + 0.4 * std::sin(2.3 * t), std::cos(1.3 * t);
        const Vector y = forward(target, x, theta_star);
        const double e2 = (y - forward(model, x, est.theta_hat)).squaredNorm();
        (i < steps / 10 ? acc0 : acc1) += e2;
        step(est, x, y, t, dt);
    }
    std::cout << "law=" << law_name << " steps=" << steps
              << " theta_err_initial=" << err0
              << " theta_err_final=" << (est.theta_hat - theta_star).norm()
              << " rms_y_err_head=" << std::sqrt(acc0 / (steps / 10))
              << " rms_y_err_tail=" << std::sqrt(acc1 / (steps - steps / 10)) << '\n';
    return 0;
}

int cmd_diagnose_settling(double k_delta, double lambda1, double z0, double delta_f,
                          double delta_acc) {
    const auto t = cldnn::settling_time(k_delta, lambda1, z0, delta_f, delta_acc);
    if (!t) {
        std::cerr << "infeasible: k_delta*Lambda1 <= delta_f^2/delta_acc^2\n";
        return 1;
    }
    std::cout << "settling_time=" << *t << '\n';
    return 0;
}

int cmd_diagnose_identifiability(const std::string& points_path, int random_points, unsigned seed,
                                 int hidden_layers, int neurons, int input_dim, int output_dim) {
    using namespace cldnn;
    const DnnModel model = make_model(input_dim, hidden_layers, neurons, output_dim);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector theta(model.parameter_count());
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = dist(rng);

    std::vector<Vector> points;
    if (!points_path.empty()) {
        std::ifstream in(points_path);
        if (!in) {
            std::cerr << "cannot open points file: " << points_path << '\n';
            return 2;
        }
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream is(line);
            std::vector<double> vals;
            std::string tok;
            while (std::getline(is, tok, ',')) vals.push_back(std::stod(tok));
            Vector p(static_cast<Eigen::Index>(vals.size()));
            for (std::size_t i = 0; i < vals.size(); ++i) p(static_cast<Eigen::Index>(i)) = vals[i];
            points.push_back(p);
        }
    } else {
        for (int i = 0; i < random_points; ++i) {
            Vector p(input_dim);
            for (int d = 0; d < input_dim; ++d) p(d) = dist(rng);
            points.push_back(p);
        }
    }
    const auto report = identifiability_rank(points, model, theta);
    std::cout << "points=" << points.size() << " rho=" << model.parameter_count()
              << " rank=" << report.rank
              << " identifiable: " << (report.identifiable ? "true" : "false") << '\n';
    return 0;
}

int cmd_table(const std::string& in_dir, const std::string& out_dir) {
    using namespace cldnn;
    std::map<std::string, std::map<ControlLaw, RunResult>> cells;
    for (const auto& entry : fs::directory_iterator(in_dir)) {
        if (entry.path().extension() != ".json" ||
            entry.path().filename().string().rfind("run_", 0) != 0)
            continue;
        std::ifstream in(entry.path());
        json j = json::parse(in);
        RunResult r;
        r.plant = j.at("plant");
        r.trajectory = trajectory_from_name(j.at("trajectory"));
        r.law = control_law_from_name(j.at("law"));
        r.seed = j.at("seed");
        r.rms_e = j.at("rms_e");
        r.rms_u = j.at("rms_u");
        r.rms_fapprox = j.at("rms_fapprox");
        r.rms_fapprox_offtraj = j.at("rms_fapprox_offtraj");
        cells[r.plant + "_" + trajectory_name(r.trajectory) + "_" + std::to_string(r.seed)]
             [r.law] = r;
    }
    if (cells.empty()) {
        std::cerr << "no run_*.json results under " << in_dir << '\n';
        return 2;
    }
    fs::create_directories(out_dir);
    for (const auto& [key, by_law] : cells) {
        if (!by_law.count(ControlLaw::Baseline)) {
            std::cerr << "cell " << key << ": missing baseline run\n";
            return 2;
        }
        const ComparisonRecord record = compare_table(by_law);
        std::ofstream(fs::path(out_dir) / ("table_" + key + ".csv")) << comparison_csv(record);
        std::ofstream(fs::path(out_dir) / ("table_" + key + ".json")) << comparison_json(record);
        std::cout << comparison_csv(record);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Concurrent-learning adaptive control simulator"};
    app.require_subcommand(1);

    Overrides ov;
    bool dump = false;
    int workers = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", ov.config_path, "config file (key = value lines)");
        cmd->add_option("--out", ov.out_dir, "output directory");
        cmd->add_option("--seed", ov.seed, "seed override (env CLDNN_SEED as fallback)");
        cmd->add_option("--duration", ov.duration, "run length [s]");
        cmd->add_option("--dt", ov.dt, "integration step [s]");
    };

    CLI::App* run = app.add_subcommand("run", "single closed-loop experiment");
    add_common(run);
    run->add_option("--law", ov.law)->check(CLI::IsMember({"baseline", "cl1", "cl2"}));
    run->add_option("--plant", ov.plant)->check(CLI::IsMember({"f1", "f2", "zero"}));
    run->add_option("--traj", ov.traj)->check(CLI::IsMember({"circular", "sinusoidal"}));
    run->add_flag("--dump-config", dump, "print the effective config and exit");

    CLI::App* grid = app.add_subcommand("grid", "full 2x2x3 benchmark grid");
    add_common(grid);
    grid->add_option("--workers", workers, "worker pool size (default: hardware)");

    unsigned reg_seed = 7;
    double reg_duration = 60.0, reg_dt = 0.01;
    std::string reg_law = "cl1";
    CLI::App* regress = app.add_subcommand("regress", "nonlinear-regression estimator demo");
    regress->add_option("--seed", reg_seed);
    regress->add_option("--duration", reg_duration);
    regress->add_option("--dt", reg_dt);
    regress->add_option("--law", reg_law)->check(CLI::IsMember({"gradient", "cl1", "cl2"}));

    CLI::App* diagnose = app.add_subcommand("diagnose", "diagnostic calculators");
    diagnose->require_subcommand(1);
    double dk = 20.0, dl = 20.0, dz = 1.0, df = 1.0, da = 0.1;
    CLI::App* settle = diagnose->add_subcommand("settling", "observer settling-time formula");
    settle->add_option("--k-delta", dk);
    settle->add_option("--lambda1", dl);
    settle->add_option("--z0", dz);
    settle->add_option("--delta-f", df);
    settle->add_option("--delta-acc", da);

    std::string points_path;
    int rand_points = 64, id_hidden = 2, id_neurons = 2, id_in = 2, id_out = 1;
    unsigned id_seed = 1;
    CLI::App* ident = diagnose->add_subcommand("identifiability", "stacked-Jacobian rank");
    ident->add_option("--points", points_path, "CSV of input points, one per line");
    ident->add_option("--random", rand_points, "draw this many random points instead");
    ident->add_option("--seed", id_seed);
    ident->add_option("--hidden-layers", id_hidden);
    ident->add_option("--neurons", id_neurons);
    ident->add_option("--input-dim", id_in);
    ident->add_option("--output-dim", id_out);

    std::string table_in = "out", table_out = "out";
    CLI::App* table = app.add_subcommand("table", "comparison tables from run results");
    table->add_option("--in", table_in, "directory with run_*.json results");
    table->add_option("--out", table_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(ov, dump);
        if (grid->parsed()) return cmd_grid(ov, workers);
        if (regress->parsed()) return cmd_regress(reg_seed, reg_duration, reg_dt, reg_law);
        if (settle->parsed()) return cmd_diagnose_settling(dk, dl, dz, df, da);
        if (ident->parsed())
            return cmd_diagnose_identifiability(points_path, rand_points, id_seed, id_hidden,
                                                id_neurons, id_in, id_out);
        if (table->parsed()) return cmd_table(table_in, table_out);
    } catch (const cldnn::ConfigError& err) {
        std::cerr << "config error: " << err.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 2;
}
