#include "cldnn/observer.hpp"

#include <cmath>

namespace cldnn {

TrackingErrors tracking_errors(const Vector& x, const Vector& xdot, const Vector& x_d,
                               const Vector& xdot_d, double alpha1) {
    TrackingErrors te;
    te.e = x - x_d;
    te.r = (xdot - xdot_d) + alpha1 * te.e;
    return te;
}

void ObserverState::anchor(const Vector& r, const Vector& u) {
    if (anchored) return;
    r_tilde0 = r - r_hat;
    u0 = u;
    delta_hat0 = delta_hat;
    anchored = true;
}

void observer_step(ObserverState& obs, const Vector& r_begin, const Vector& r_end,
                   const Vector& xdd_d, const Vector& edot, const Vector& u, double alpha1,
                   double dt) {
    const Vector r_tilde_begin = r_begin - obs.r_hat;

    // r_hat' = a(s) - alpha2 * r_hat with r interpolated linearly in s.
    auto deriv = [&](const Vector& r_hat, double s) {
        const Vector r_s = (1.0 - s) * r_begin + s * r_end;
        return Vector(obs.delta_hat - xdd_d + alpha1 * edot + obs.alpha2 * (r_s - r_hat));
    };
    const Vector k1 = deriv(obs.r_hat, 0.0);
    const Vector k2 = deriv(obs.r_hat + 0.5 * dt * k1, 0.5);
    const Vector k3 = deriv(obs.r_hat + 0.5 * dt * k2, 0.5);
    const Vector k4 = deriv(obs.r_hat + dt * k3, 1.0);
    obs.r_hat += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!obs.r_hat.allFinite()) throw std::runtime_error("observer state became non-finite");

    const Vector r_tilde_end = r_end - obs.r_hat;
    const double gain = obs.k_delta * obs.alpha2 + 1.0;
    obs.integral_acc += 0.5 * dt * gain * (r_tilde_begin + r_tilde_end);
    obs.delta_hat = obs.delta_hat0 + obs.k_delta * (r_tilde_end - obs.r_tilde0) - (u - obs.u0) +
                    obs.integral_acc;
}

std::optional<double> settling_time(double k_delta, double lambda1, double z0_norm,
                                    double delta_f, double delta_acc, double t0) {
    const double kl = k_delta * lambda1;
    const double df2 = delta_f * delta_f;
    if (kl * delta_acc * delta_acc <= df2) return std::nullopt;  // infeasible gain condition
    const double num = kl * z0_norm * z0_norm - df2;
    const double den = kl * delta_acc * delta_acc - df2;
    if (num <= den) return t0;  // already within the prescribed accuracy
    return t0 + std::log(num / den) / lambda1;
}

}  // namespace cldnn
