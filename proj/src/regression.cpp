#include "cldnn/regression.hpp"

#include <cmath>

namespace cldnn {

namespace {

Vector stack_correction_cl1(const RegressionEstimator& est, const Vector& theta) {
    Vector sum = Vector::Zero(theta.size());
    for (const auto& s : est.stack.active()) {
        const Matrix jac = jacobian(est.model, s.input, theta);
        sum.noalias() += jac.transpose() * (s.target - forward(est.model, s.input, theta));
    }
    return sum;
}

Vector stack_correction_cl2(const RegressionEstimator& est, const Vector& theta) {
    Vector sum = Vector::Zero(theta.size());
    for (const auto& s : est.stack.active()) {
        const Matrix jac = jacobian(est.model, s.input, theta);
        sum.noalias() += jac.transpose() * (s.target - jac * theta);
    }
    return sum;
}

Vector raw_rate(const RegressionEstimator& est, const Vector& theta) {
    switch (est.law) {
        case RegressionLaw::CL1:
            return est.gamma1 * stack_correction_cl1(est, theta) - est.gamma2 * theta;
        case RegressionLaw::CL2:
            return est.gamma1 * stack_correction_cl2(est, theta) - est.gamma2 * theta;
        case RegressionLaw::Gradient:
            break;
    }
    throw std::logic_error("gradient law has no stack-only rate");
}

}  // namespace

Vector rate_gradient(const RegressionEstimator& est, const Vector& x, const Vector& y) {
    const Vector y_tilde = y - forward(est.model, x, est.theta_hat);
    return est.gamma1 *
           (jacobian(est.model, x, est.theta_hat).transpose() * y_tilde - est.sigma * est.theta_hat);
}

Vector rate_cl1(const RegressionEstimator& est) {
    const Vector raw =
        est.gamma1 * stack_correction_cl1(est, est.theta_hat) - est.gamma2 * est.theta_hat;
    return project_rate(est.theta_hat, raw, est.space);
}

Vector rate_cl2(const RegressionEstimator& est) {
    const Vector raw =
        est.gamma1 * stack_correction_cl2(est, est.theta_hat) - est.gamma2 * est.theta_hat;
    return project_rate(est.theta_hat, raw, est.space);
}

void step(RegressionEstimator& est, const Vector& x, const Vector& y, double t, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
    est.stack.record(StackSample{x, y, Vector{}, t});

    auto rate_at = [&](const Vector& theta) {
        Vector raw = est.law == RegressionLaw::Gradient
                         ? Vector(est.gamma1 *
                                  (jacobian(est.model, x, theta).transpose() *
                                       (y - forward(est.model, x, theta)) -
                                   est.sigma * theta))
                         : raw_rate(est, theta);
        return project_rate(theta, raw, est.space);
    };

    Vector theta = est.theta_hat;
    if (est.integrator == Integrator::Euler) {
        theta += dt * rate_at(theta);
    } else {
        const Vector k1 = rate_at(theta);
        const Vector k2 = rate_at(est.space.clamp(theta + 0.5 * dt * k1));
        const Vector k3 = rate_at(est.space.clamp(theta + 0.5 * dt * k2));
        const Vector k4 = rate_at(est.space.clamp(theta + dt * k3));
        theta += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!theta.allFinite())
        throw NumericalDivergenceError("theta_hat became non-finite at t = " + std::to_string(t));
    est.theta_hat = est.space.clamp(theta);
}

LossEstimate loss_estimate(const DnnModel& model, const Vector& theta, const NreProblem& problem,
                           int grid_density, double sigma) {
    if (grid_density < 2) throw std::invalid_argument("grid_density must be at least 2 per axis");
    const int m = static_cast<int>(problem.box_lo.size());
    double cell = 1.0;
    for (int a = 0; a < m; ++a) cell *= (problem.box_hi(a) - problem.box_lo(a)) / grid_density;

    LossEstimate out;
    out.grid_density = grid_density;
    out.sigma = sigma;

    // Midpoint rule over the tensor grid.
    std::vector<int> idx(static_cast<std::size_t>(m), 0);
    Vector x(m);
    double total = 0.0;
    bool done = false;
    while (!done) {
        for (int a = 0; a < m; ++a) {
            const double h = (problem.box_hi(a) - problem.box_lo(a)) / grid_density;
            x(a) = problem.box_lo(a) + (idx[static_cast<std::size_t>(a)] + 0.5) * h;
        }
        total += (problem.f_true(x) - forward(model, x, theta)).squaredNorm();
        int a = 0;
        for (; a < m; ++a) {
            if (++idx[static_cast<std::size_t>(a)] < grid_density) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
        done = (a == m);
    }
    double measure = 1.0;
    for (int a = 0; a < m; ++a) measure *= problem.box_hi(a) - problem.box_lo(a);
    out.value = total * cell + sigma * theta.squaredNorm() * measure;
    return out;
}

}  // namespace cldnn
