#pragma once

#include "cldnn/dnn.hpp"

#include <optional>

namespace cldnn {

/// e = x - x_d, r = (xdot - xdot_d) + alpha1 * e.
struct TrackingErrors {
    Vector e;
    Vector r;
};

TrackingErrors tracking_errors(const Vector& x, const Vector& xdot, const Vector& x_d,
                               const Vector& xdot_d, double alpha1);

/// State-derivative observer in its integral (u-dot free) form. r_hat obeys
/// r_hat' = Delta_hat - xdd_d + alpha1*edot + alpha2*(r - r_hat);
/// Delta_hat is reconstructed algebraically from r_tilde, u, and the
/// accumulated integral of (k_Delta*alpha2 + 1) r_tilde.
struct ObserverState {
    Vector r_hat;
    Vector delta_hat;
    Vector integral_acc;  // int (k_Delta*alpha2 + 1) r_tilde dtau
    double alpha2 = 50.0;
    double k_delta = 20.0;
    double t_delta = 3.0;    // settling time gate for stack admission
    double delta_acc = 0.1;  // prescribed accuracy (reporting only)

    // Anchors of the integral form, captured at initialization.
    Vector r_tilde0;
    Vector u0;
    Vector delta_hat0;
    bool anchored = false;

    explicit ObserverState(int n = 0)
        : r_hat(Vector::Zero(n)), delta_hat(Vector::Zero(n)), integral_acc(Vector::Zero(n)) {}

    /// Fixes the t0 anchors on the first call.
    void anchor(const Vector& r, const Vector& u);
};

/// Advances r_hat one RK4 step with Delta_hat, u, and the reference terms
/// held, then refreshes Delta_hat from the integral form (trapezoid rule on
/// r_tilde). `r_begin` / `r_end` are the true filtered errors at the start
/// and end of the step.
void observer_step(ObserverState& obs, const Vector& r_begin, const Vector& r_end,
                   const Vector& xdd_d, const Vector& edot, const Vector& u, double alpha1,
                   double dt);

/// Settling-time formula: t0 + (1/Lambda1) ln((kD*L1*|z0|^2 - df^2) /
/// (kD*L1*da^2 - df^2)). Returns nullopt when the feasibility condition
/// kD*Lambda1 > df^2/da^2 fails.
std::optional<double> settling_time(double k_delta, double lambda1, double z0_norm,
                                    double delta_f, double delta_acc, double t0 = 0.0);

}  // namespace cldnn
