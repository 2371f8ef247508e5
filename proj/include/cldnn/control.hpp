#pragma once

#include "cldnn/dnn.hpp"
#include "cldnn/history_stack.hpp"
#include "cldnn/ls_gain.hpp"
#include "cldnn/projection.hpp"

namespace cldnn {

enum class ControlLaw { Baseline, CL1, CL2 };

const char* control_law_name(ControlLaw law);
ControlLaw control_law_from_name(const std::string& name);

/// Adaptive weight estimator for the tracking controller. Baseline is the
/// same control structure with gamma1 = gamma2 = 0 (no stack term, no
/// leakage); the benchmark harness additionally freezes its weights at the
/// shared random initialization, making it the no-learning comparator.
struct ControlEstimator {
    DnnModel model;
    Vector theta_hat;
    SearchSpace space;
    LsGain ls_gain;
    HistoryStack stack;  // Control mode
    ControlLaw law = ControlLaw::CL1;
    double gamma1 = 0.12;
    double gamma2 = 0.005;
    double gamma3 = 0.001;      // dither gain
    double dither_phase = 0.0;  // per-channel phase step [s]
};

/// u = xdd_d - Phi(X, theta_hat) - k1*r - e - alpha1*edot.
Vector control_input(const DnnModel& model, const Vector& theta_hat, const Vector& X,
                     const Vector& e, const Vector& r, const Vector& edot, const Vector& xdd_d,
                     double k1, double alpha1);

/// u_hat_i = Delta_hat_i - Phi(X_i, theta_hat), with the current estimate.
Vector reconstruct_input(const StackSample& sample, const DnnModel& model,
                         const Vector& theta_hat);

/// Scalar exploration signal d(t) broadcast to all parameter channels,
/// scaled by gamma3. A nonzero phase_step staggers channel i by
/// i * phase_step seconds.
double dither_scalar(double t);
Vector dither(double t, double gamma3, int rho, double phase_step = 0.0);

/// Raw (pre-projection) rate of the active law, everything evaluated at
/// `theta`: Gamma (Phi'^T(X, theta) r - gamma2 theta - gamma1 * stack term)
/// + dither. The stack term is law-specific; the sums re-evaluate every
/// stored regressor at `theta`.
Vector control_raw_rate(const ControlEstimator& est, const Vector& theta, const Vector& r,
                        const Vector& X, double t);

/// Projected rates of the two concurrent-learning laws.
Vector rate_control_cl1(const ControlEstimator& est, const Vector& r, const Vector& X, double t);
Vector rate_control_cl2(const ControlEstimator& est, const Vector& r, const Vector& X, double t);

}  // namespace cldnn
