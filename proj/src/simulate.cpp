#include "cldnn/simulate.hpp"

#include "cldnn/observer.hpp"

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cldnn {

void ExperimentConfig::validate() const {
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
    if (duration <= 0.0) throw std::invalid_argument("duration must be positive");
    if (stack_capacity <= 0) throw std::invalid_argument("stack capacity must be positive");
    if (stack_refresh <= 0) throw std::invalid_argument("stack refresh must be positive");
    if (hidden_layers <= 0 || neurons <= 0)
        throw std::invalid_argument("network must have at least one hidden neuron");
    if (gamma0 <= 0.0) throw std::invalid_argument("Gamma(0) must be positive");
    if (q0.size() != 2 || qdot0.size() != 2)
        throw std::invalid_argument("initial state must have dimension 2");
    make_plant(plant);  // throws on unknown name
}

std::string run_csv_header() {
    return "t,x1,x2,xdot1,xdot2,e1,e2,r1,r2,u1,u2,"
           "rtilde_norm,dtilde_norm,lambda_min_gamma,lambda_min_gram,V";
}

namespace {

Vector draw_uniform(std::mt19937& rng, int count) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector v(count);
    for (int i = 0; i < count; ++i) v(i) = dist(rng);
    return v;
}

double lambda_min_sym(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

void write_row(std::ostream& os, double t, const Vector& x, const Vector& xdot, const Vector& e,
               const Vector& r, const Vector& u, double rt, double dtl, double lgam, double lgram,
               double v) {
    os.precision(std::numeric_limits<double>::max_digits10);
    os << t << ',' << x(0) << ',' << x(1) << ',' << xdot(0) << ',' << xdot(1) << ',' << e(0)
       << ',' << e(1) << ',' << r(0) << ',' << r(1) << ',' << u(0) << ',' << u(1) << ',' << rt
       << ',' << dtl << ',' << lgam << ',' << lgram << ',' << v << '\n';
}

}  // namespace

EnvelopeFit fit_envelope(const std::vector<double>& t, const std::vector<double>& v) {
    EnvelopeFit fit;
    if (v.size() < 3 || t.size() != v.size()) return fit;
    fit.v0 = v.front();

    const std::size_t tail = std::max<std::size_t>(1, v.size() / 10);
    fit.offset = *std::max_element(v.end() - static_cast<std::ptrdiff_t>(tail), v.end());

    const double a = fit.v0 - fit.offset;
    if (a <= 0.0) return fit;  // never decayed below its start

    const double tiny = 1e-15 * std::max(fit.v0, 1.0);
    double rate = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (t[i] <= 0.0 || v[i] <= fit.offset + tiny) continue;
        rate = std::min(rate, std::log(a / (v[i] - fit.offset)) / t[i]);
    }
    if (std::isinf(rate)) rate = std::log(a / tiny) / t.back();
    fit.rate = rate;
    fit.ok = rate > 0.0 && fit.offset <= fit.v0;
    return fit;
}

double off_trajectory_eval(const DnnModel& model, const Vector& theta_hat, const Plant& plant,
                           unsigned seed) {
    std::mt19937 rng(seed);
    double acc = 0.0;
    const int points = 100;
    for (int i = 0; i < points; ++i) {
        const Vector X = draw_uniform(rng, 4);
        const Vector x = X.head(2);
        const Vector xd = X.tail(2);
        acc += (plant.f(x, xd) - forward(model, X, theta_hat)).squaredNorm();
    }
    return std::sqrt(acc / points);
}

RunResult run_experiment(const ExperimentConfig& config, std::ostream* csv) {
    config.validate();
    const Plant plant = make_plant(config.plant);
    const ReferenceTrajectory traj = make_trajectory(config.trajectory);
    const DnnModel model =
        make_model(4, config.hidden_layers, config.neurons, 2, config.activation);
    const int rho = model.parameter_count();
    const double theta_bar =
        config.theta_bar > 0.0 ? config.theta_bar : 10.0 * std::sqrt(static_cast<double>(rho));

    std::mt19937 rng(config.seed);
    Vector theta0 = config.theta_init.size() ? config.theta_init : draw_uniform(rng, rho);
    if (theta0.size() != rho) throw std::invalid_argument("theta_init has wrong dimension");

    // The comparison baseline runs the identical controller with the weights
    // held at their random initialization: no stack term, no leakage, and no
    // instantaneous update either.
    const bool baseline = config.law == ControlLaw::Baseline;
    ControlEstimator est{
        model,
        SearchSpace::with_radius(theta_bar).clamp(theta0),
        SearchSpace::with_radius(theta_bar),
        LsGain(rho, config.gamma0, config.beta, config.eig_min_gate, config.eig_max_gate),
        HistoryStack(config.stack_capacity, 1, StackMode::Control, config.t_delta),
        config.law,
        baseline ? 0.0 : config.gamma1,
        baseline ? 0.0 : config.gamma2,
        config.gamma3,
        config.dither_phase};

    ObserverState obs(2);
    obs.alpha2 = config.alpha2;
    obs.k_delta = config.k_delta;
    obs.t_delta = config.t_delta;
    obs.delta_acc = config.delta_acc;

    Vector x = config.q0;
    Vector xdot = config.qdot0;

    RunResult result;
    result.plant = config.plant;
    result.trajectory = config.trajectory;
    result.law = config.law;
    result.seed = config.seed;
    result.lyapunov_full = config.theta_star.size() > 0;

    const int steps = static_cast<int>(std::llround(config.duration / config.dt));
    result.time.reserve(steps);
    result.fapprox.reserve(steps);
    std::vector<double> v_series;
    v_series.reserve(steps);

    // Fixed off-trajectory test set (same stream as off_trajectory_eval) so the
    // off-trajectory RMS can be accumulated over the full duration.
    std::vector<Vector> ot_inputs;
    std::vector<Vector> ot_truth;
    {
        std::mt19937 ot_rng(config.seed);
        ot_inputs.reserve(100);
        ot_truth.reserve(100);
        for (int p = 0; p < 100; ++p) {
            Vector X_ot = draw_uniform(ot_rng, 4);
            ot_truth.push_back(plant.f(X_ot.head(2), X_ot.tail(2)));
            ot_inputs.push_back(std::move(X_ot));
        }
    }

    double se = 0.0, su = 0.0, sf = 0.0, sfo = 0.0;
    int recorded = 0;

    if (csv) *csv << run_csv_header() << '\n';

    for (int i = 0; i < steps; ++i) {
        const double t = i * config.dt;
        const ReferencePoint ref = reference(traj, t);
        const auto [e, r] = tracking_errors(x, xdot, ref.x_d, ref.xdot_d, config.alpha1);
        const Vector edot = xdot - ref.xdot_d;
        Vector X(4);
        X << x, xdot;

        const Vector u = control_input(model, est.theta_hat, X, e, r, edot, ref.xdd_d, config.k1,
                                       config.alpha1);
        if (i == 0) obs.anchor(r, u);

        const Vector f_true = plant.f(x, xdot);
        const double fa = (f_true - forward(model, X, est.theta_hat)).norm();
        const Vector r_tilde = r - obs.r_hat;
        const Vector delta_tilde = f_true + u - obs.delta_hat;

        // One data point is gathered every stack_refresh control updates
        // (0.05 s at the defaults), so the window spans a full orbit.
        if (t >= config.t_delta && i % config.stack_refresh == 0)
            est.stack.record({X, u, obs.delta_hat, t});

        const Matrix gram = regressor_gram(est.stack, model, est.theta_hat);
        const double lgram = est.stack.active().empty() ? 0.0 : lambda_min_sym(gram);
        if (fe_diagnostic(gram, config.lambda_e).satisfied && !est.stack.active().empty())
            result.fe_satisfied_ever = true;

        double v = 0.5 * (r.squaredNorm() + e.squaredNorm());
        if (result.lyapunov_full) {
            const Vector th_err = config.theta_star - est.theta_hat;
            v += 0.5 * th_err.dot(est.ls_gain.gamma_inv() * th_err);
        }

        const auto [lgam, lgam_max] = est.ls_gain.gamma_eigen_range();
        (void)lgam_max;
        if (csv)
            write_row(*csv, t, x, xdot, e, r, u, r_tilde.norm(), delta_tilde.norm(), lgam, lgram,
                      v);
        result.time.push_back(t);
        result.fapprox.push_back(fa);
        v_series.push_back(v);
        se += e.squaredNorm();
        su += u.squaredNorm();
        sf += fa * fa;
        double so = 0.0;
        for (std::size_t p = 0; p < ot_inputs.size(); ++p)
            so += (ot_truth[p] - forward(model, ot_inputs[p], est.theta_hat)).squaredNorm();
        sfo += so / static_cast<double>(ot_inputs.size());
        ++recorded;

        // Gain and estimate updates with the step-start data held.
        est.ls_gain.step(gram, est.gamma1, config.dt);

        const double h = config.dt;
        if (!baseline) {
            auto rate_at = [&](const Vector& th, double ts) {
                return project_rate(th, control_raw_rate(est, th, r, X, ts), est.space);
            };
            const Vector& th0 = est.theta_hat;
            const Vector k1v = rate_at(th0, t);
            const Vector k2v = rate_at(est.space.clamp(th0 + 0.5 * h * k1v), t + 0.5 * h);
            const Vector k3v = rate_at(est.space.clamp(th0 + 0.5 * h * k2v), t + 0.5 * h);
            const Vector k4v = rate_at(est.space.clamp(th0 + h * k3v), t + h);
            est.theta_hat =
                est.space.clamp(th0 + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v));
        }

        // Plant under zero-order-hold input.
        auto accel = [&](const Vector& xs, const Vector& xds) -> Vector {
            return plant.f(xs, xds) + u;
        };
        const Vector a1 = accel(x, xdot);
        const Vector x2 = x + 0.5 * h * xdot, xd2 = xdot + 0.5 * h * a1;
        const Vector a2 = accel(x2, xd2);
        const Vector x3 = x + 0.5 * h * xd2, xd3 = xdot + 0.5 * h * a2;
        const Vector a3 = accel(x3, xd3);
        const Vector x4 = x + h * xd3, xd4 = xdot + h * a3;
        const Vector a4 = accel(x4, xd4);
        const Vector x_new = x + (h / 6.0) * (xdot + 2.0 * xd2 + 2.0 * xd3 + xd4);
        const Vector xdot_new = xdot + (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);

        const ReferencePoint ref_end = reference(traj, t + h);
        const auto [e_end, r_end] =
            tracking_errors(x_new, xdot_new, ref_end.x_d, ref_end.xdot_d, config.alpha1);
        (void)e_end;
        observer_step(obs, r, r_end, ref.xdd_d, edot, u, config.alpha1, h);

        x = x_new;
        xdot = xdot_new;
        if (!x.allFinite() || !xdot.allFinite() || !est.theta_hat.allFinite() ||
            x.norm() > 1e6) {
            result.aborted = true;
            break;
        }
    }

    const double inv = recorded > 0 ? 1.0 / recorded : 0.0;
    result.rms_e = std::sqrt(se * inv);
    result.rms_u = std::sqrt(su * inv);
    result.rms_fapprox = std::sqrt(sf * inv);
    result.theta_final = est.theta_hat;
    result.rms_fapprox_offtraj = std::sqrt(sfo * inv);
    result.envelope = fit_envelope(result.time, v_series);
    return result;
}

double improvement_pct(double baseline, double value) {
    if (baseline == 0.0) return 0.0;
    return 100.0 * (baseline - value) / baseline;
}

ComparisonRecord compare_table(const std::map<ControlLaw, RunResult>& results) {
    const auto base_it = results.find(ControlLaw::Baseline);
    if (base_it == results.end())
        throw std::invalid_argument("comparison requires a baseline result");
    const RunResult& base = base_it->second;
    for (const auto& [law, res] : results) {
        if (res.seed != base.seed)
            throw std::invalid_argument("comparison results must share a seed");
        if (res.plant != base.plant || res.trajectory != base.trajectory)
            throw std::invalid_argument("comparison results must share plant and trajectory");
    }

    ComparisonRecord record;
    record.plant = base.plant;
    record.trajectory = base.trajectory;
    record.seed = base.seed;

    const std::vector<std::pair<std::string, double RunResult::*>> metrics = {
        {"rms_e", &RunResult::rms_e},
        {"rms_u", &RunResult::rms_u},
        {"rms_fapprox", &RunResult::rms_fapprox},
        {"rms_fapprox_offtraj", &RunResult::rms_fapprox_offtraj},
    };
    for (const auto& [name, member] : metrics) {
        ComparisonRow row;
        row.metric = name;
        for (const auto& [law, res] : results) {
            row.value_by_law[control_law_name(law)] = res.*member;
            if (law != ControlLaw::Baseline)
                row.improvement_by_law[control_law_name(law)] =
                    improvement_pct(base.*member, res.*member);
        }
        record.rows.push_back(std::move(row));
    }
    return record;
}

std::string comparison_csv(const ComparisonRecord& record) {
    std::ostringstream os;
    os.precision(std::numeric_limits<double>::max_digits10);
    os << "metric";
    const auto& first = record.rows.front();
    for (const auto& [law, _] : first.value_by_law) os << ',' << law;
    for (const auto& [law, _] : first.improvement_by_law) os << ',' << law << "_improvement_pct";
    os << '\n';
    for (const auto& row : record.rows) {
        os << row.metric;
        for (const auto& [_, value] : row.value_by_law) os << ',' << value;
        for (const auto& [_, pct] : row.improvement_by_law) os << ',' << pct;
        os << '\n';
    }
    return os.str();
}

std::string comparison_json(const ComparisonRecord& record) {
    nlohmann::json j;
    j["plant"] = record.plant;
    j["trajectory"] = trajectory_name(record.trajectory);
    j["seed"] = record.seed;
    for (const auto& row : record.rows) {
        nlohmann::json r;
        for (const auto& [law, value] : row.value_by_law) r[law] = value;
        for (const auto& [law, pct] : row.improvement_by_law) r[law + "_improvement_pct"] = pct;
        j["metrics"][row.metric] = r;
    }
    return j.dump(2);
}

std::string run_json(const RunResult& result) {
    nlohmann::json j;
    j["plant"] = result.plant;
    j["trajectory"] = trajectory_name(result.trajectory);
    j["law"] = control_law_name(result.law);
    j["seed"] = result.seed;
    j["rms_e"] = result.rms_e;
    j["rms_u"] = result.rms_u;
    j["rms_fapprox"] = result.rms_fapprox;
    j["rms_fapprox_offtraj"] = result.rms_fapprox_offtraj;
    j["fe_satisfied_ever"] = result.fe_satisfied_ever;
    j["aborted"] = result.aborted;
    j["lyapunov"] = {{"full", result.lyapunov_full},
                     {"envelope",
                      {{"v0", result.envelope.v0},
                       {"rate", result.envelope.rate},
                       {"offset", result.envelope.offset},
                       {"ok", result.envelope.ok}}}};
    return j.dump(2);
}

}  // namespace cldnn
