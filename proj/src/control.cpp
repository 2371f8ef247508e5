#include "cldnn/control.hpp"

#include <cmath>

namespace cldnn {

const char* control_law_name(ControlLaw law) {
    switch (law) {
        case ControlLaw::Baseline: return "baseline";
        case ControlLaw::CL1: return "cl1";
        case ControlLaw::CL2: return "cl2";
    }
    return "?";
}

ControlLaw control_law_from_name(const std::string& name) {
    if (name == "baseline") return ControlLaw::Baseline;
    if (name == "cl1") return ControlLaw::CL1;
    if (name == "cl2") return ControlLaw::CL2;
    throw std::invalid_argument("unknown control law: " + name);
}

Vector control_input(const DnnModel& model, const Vector& theta_hat, const Vector& X,
                     const Vector& e, const Vector& r, const Vector& edot, const Vector& xdd_d,
                     double k1, double alpha1) {
    return xdd_d - forward(model, X, theta_hat) - k1 * r - e - alpha1 * edot;
}

Vector reconstruct_input(const StackSample& sample, const DnnModel& model,
                         const Vector& theta_hat) {
    return sample.observer_output - forward(model, sample.input, theta_hat);
}

double dither_scalar(double t) {
    const double s = std::sin(t);
    const double s2 = std::sin(2.0 * t);
    const double s12 = std::sin(-1.2 * t);
    const double c02 = std::cos(0.2 * t);
    return c02 * c02 + s2 * s2 * std::cos(0.1 * t) + s12 * s12 * std::cos(0.5 * t) + s * s;
}

Vector dither(double t, double gamma3, int rho, double phase_step) {
    if (phase_step == 0.0) return Vector::Constant(rho, gamma3 * dither_scalar(t));
    Vector d(rho);
    for (int i = 0; i < rho; ++i) d(i) = gamma3 * dither_scalar(t + i * phase_step);
    return d;
}

namespace {

// Stack term of law 1: sum_i Phi'^T(X_i, theta) (u_i - u_hat_i).
Vector stack_term_cl1(const ControlEstimator& est, const Vector& theta) {
    Vector sum = Vector::Zero(theta.size());
    for (const auto& s : est.stack.active()) {
        const Vector u_hat = s.observer_output - forward(est.model, s.input, theta);
        sum.noalias() += jacobian(est.model, s.input, theta).transpose() * (s.target - u_hat);
    }
    return sum;
}

// Stack term of law 2: sum_i Phi'^T(X_i, theta)
// (u_i - Delta_hat_i + Phi'(X_i, theta) theta).
Vector stack_term_cl2(const ControlEstimator& est, const Vector& theta) {
    Vector sum = Vector::Zero(theta.size());
    for (const auto& s : est.stack.active()) {
        const Matrix jac = jacobian(est.model, s.input, theta);
        sum.noalias() += jac.transpose() * (s.target - s.observer_output + jac * theta);
    }
    return sum;
}

}  // namespace

Vector control_raw_rate(const ControlEstimator& est, const Vector& theta, const Vector& r,
                        const Vector& X, double t) {
    Vector inner = jacobian(est.model, X, theta).transpose() * r - est.gamma2 * theta;
    if (est.gamma1 != 0.0 && est.law != ControlLaw::Baseline) {
        inner -= est.gamma1 * (est.law == ControlLaw::CL1 ? stack_term_cl1(est, theta)
                                                          : stack_term_cl2(est, theta));
    }
    return est.ls_gain.apply(inner) +
           dither(t, est.gamma3, static_cast<int>(theta.size()), est.dither_phase);
}

Vector rate_control_cl1(const ControlEstimator& est, const Vector& r, const Vector& X, double t) {
    ControlEstimator view = est;
    view.law = ControlLaw::CL1;
    return project_rate(est.theta_hat, control_raw_rate(view, est.theta_hat, r, X, t), est.space);
}

Vector rate_control_cl2(const ControlEstimator& est, const Vector& r, const Vector& X, double t) {
    ControlEstimator view = est;
    view.law = ControlLaw::CL2;
    return project_rate(est.theta_hat, control_raw_rate(view, est.theta_hat, r, X, t), est.space);
}

}  // namespace cldnn
