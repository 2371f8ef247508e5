#pragma once

#include "cldnn/dnn.hpp"
#include "cldnn/history_stack.hpp"
#include "cldnn/projection.hpp"

#include <functional>
#include <stdexcept>

namespace cldnn {

class NumericalDivergenceError : public std::runtime_error {
public:
    explicit NumericalDivergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Nonlinear regression setup y = f(x) + delta(t) over an axis-aligned box.
/// f_true and disturbance are harness-side oracles; the estimator itself
/// only ever sees (x, y) pairs.
struct NreProblem {
    std::function<Vector(const Vector&)> f_true;
    std::function<Vector(double)> disturbance;  // may be empty (no disturbance)
    Vector box_lo, box_hi;                      // Omega
};

enum class RegressionLaw { Gradient, CL1, CL2 };

enum class Integrator { Euler, RK4 };

struct RegressionEstimator {
    DnnModel model;
    Vector theta_hat;
    double gamma1 = 1.0;
    double gamma2 = 0.0;
    double sigma = 0.0;  // L2 regularizer weight in the gradient law
    SearchSpace space;
    HistoryStack stack;
    RegressionLaw law = RegressionLaw::CL1;
    Integrator integrator = Integrator::RK4;
};

/// Instantaneous descent rate for the gradient-flow estimator:
/// -gamma1*sigma*theta + gamma1*Phi'^T(x, theta) (y - Phi(x, theta)).
Vector rate_gradient(const RegressionEstimator& est, const Vector& x, const Vector& y);

/// Concurrent-learning law 1: projected
/// gamma1 sum_i Phi'^T(x_i, theta)(y_i - Phi(x_i, theta)) - gamma2*theta,
/// with every stack regressor re-evaluated at the current estimate.
Vector rate_cl1(const RegressionEstimator& est);

/// Concurrent-learning law 2: projected
/// gamma1 sum_i Phi'^T(x_i, theta)(y_i - Phi'(x_i, theta) theta) - gamma2*theta.
Vector rate_cl2(const RegressionEstimator& est);

/// Records (x, y), advances theta_hat one step of the active law, and
/// retracts into the search space. Throws NumericalDivergenceError on
/// non-finite state.
void step(RegressionEstimator& est, const Vector& x, const Vector& y, double t, double dt);

struct LossEstimate {
    double value = 0.0;
    int grid_density = 0;
    double sigma = 0.0;
};

/// Riemann-sum approximation of the regularized L2 loss over the box on a
/// uniform grid with `grid_density` points per axis.
LossEstimate loss_estimate(const DnnModel& model, const Vector& theta, const NreProblem& problem,
                           int grid_density, double sigma = 0.0);

}  // namespace cldnn
