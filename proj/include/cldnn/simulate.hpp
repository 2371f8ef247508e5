#pragma once

#include "cldnn/control.hpp"
#include "cldnn/plants.hpp"
#include "cldnn/trajectory.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace cldnn {

/// Full closed-loop experiment description. Defaults reproduce the
/// benchmark protocol: 100 s at dt = 0.01 with a 4-hidden-layer tanh net.
struct ExperimentConfig {
    std::string plant = "f1";
    TrajectoryKind trajectory = TrajectoryKind::Circular;
    ControlLaw law = ControlLaw::CL1;

    double duration = 100.0;
    double dt = 0.01;
    double t_delta = 3.0;
    int stack_capacity = 200;
    int stack_refresh = 5;  // steps between recorded samples / snapshot refreshes

    double alpha1 = 15.0;
    double alpha2 = 50.0;
    double k1 = 40.0;
    double k_delta = 20.0;
    double beta = 0.01;
    double gamma1 = 0.12;
    double gamma2 = 0.005;
    double gamma3 = 0.001;
    double gamma0 = 1.0;  // Gamma(0) = gamma0 * I
    double eig_min_gate = 1e-3;
    double eig_max_gate = 1e3;

    int hidden_layers = 4;
    int neurons = 2;
    ActivationKind activation = ActivationKind::Tanh;

    unsigned seed = 1;
    Vector q0 = (Vector(2) << 1.0472, -0.5236).finished();
    Vector qdot0 = Vector::Zero(2);

    double theta_bar = 0.0;  // <= 0 selects 10*sqrt(rho)
    double lambda_e = 1e-6;
    double delta_acc = 0.1;
    double dither_phase = 0.0;  // per-channel phase step [s]

    /// Optional known true parameters (realizable-target runs): enables the
    /// full Lyapunov monitor. Empty means unknown.
    Vector theta_star;
    /// Optional explicit initial estimate; empty draws U(-1,1) from `seed`.
    Vector theta_init;

    void validate() const;
};

/// Exponential-plus-offset envelope v(t) <= a*exp(-rate*t) + offset fitted
/// to a monitor series, with a = v(0) - offset.
struct EnvelopeFit {
    double rate = 0.0;
    double offset = 0.0;
    double v0 = 0.0;
    bool ok = false;  // rate > 0 and offset <= v0
};

EnvelopeFit fit_envelope(const std::vector<double>& t, const std::vector<double>& v);

struct RunResult {
    std::string plant;
    TrajectoryKind trajectory = TrajectoryKind::Circular;
    ControlLaw law = ControlLaw::CL1;
    unsigned seed = 0;

    double rms_e = 0.0;
    double rms_u = 0.0;
    double rms_fapprox = 0.0;
    // RMS over the full duration of the per-step off-trajectory error
    // (itself an RMS over the fixed 100-point test set at theta_hat(t)).
    double rms_fapprox_offtraj = 0.0;
    bool fe_satisfied_ever = false;
    bool aborted = false;
    bool lyapunov_full = false;  // V included the parameter-error term
    EnvelopeFit envelope;

    // Plot-ready series of the function-approximation error norm.
    std::vector<double> time;
    std::vector<double> fapprox;

    Vector theta_final;
};

/// Header line of the per-step CSV schema.
std::string run_csv_header();

/// Integrates plant + controller + observer + estimator with RK4 at a
/// shared dt; the control input is held over each step. Per-step rows are
/// streamed to `csv` when given. Deterministic for a fixed config.
RunResult run_experiment(const ExperimentConfig& config, std::ostream* csv = nullptr);

/// RMS of ||f(x, xdot) - Phi(X, theta_hat)|| over 100 points drawn
/// U(-1,1)^4 from `seed`. The point set depends only on the seed.
double off_trajectory_eval(const DnnModel& model, const Vector& theta_hat, const Plant& plant,
                           unsigned seed);

struct ComparisonRow {
    std::string metric;
    std::map<std::string, double> value_by_law;        // law name -> value
    std::map<std::string, double> improvement_by_law;  // CL laws only, percent
};

struct ComparisonRecord {
    std::string plant;
    TrajectoryKind trajectory = TrajectoryKind::Circular;
    unsigned seed = 0;
    std::vector<ComparisonRow> rows;
};

/// Percentage improvement of `value` over `baseline`: 100*(b - v)/b.
double improvement_pct(double baseline, double value);

/// Benchmark-table record from one baseline run plus any CL runs sharing
/// its seed. Throws on mismatched seeds or a missing baseline.
ComparisonRecord compare_table(const std::map<ControlLaw, RunResult>& results);

std::string comparison_csv(const ComparisonRecord& record);
std::string comparison_json(const ComparisonRecord& record);

/// JSON object with the per-run summary metrics.
std::string run_json(const RunResult& result);

}  // namespace cldnn
