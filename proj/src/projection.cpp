#include "cldnn/projection.hpp"

#include <string>

namespace cldnn {

Vector project_rate(const Vector& theta_hat, const Vector& raw_rate, const SearchSpace& space) {
    if (theta_hat.size() != raw_rate.size())
        throw DimensionError("theta_hat and raw_rate length mismatch");
    const double norm = theta_hat.norm();
    if (norm > space.radius * (1.0 + 1e-9))
        throw ProjectionInvariantError("theta_hat outside search space: |theta| = " +
                                       std::to_string(norm) + " > " +
                                       std::to_string(space.radius));
    const double c = space.ramp(norm);
    if (c == 0.0 || norm == 0.0) return raw_rate;
    const double radial = theta_hat.dot(raw_rate);
    if (radial <= 0.0) return raw_rate;  // inward rates are never attenuated
    return raw_rate - (c * radial / (norm * norm)) * theta_hat;
}

Vector advance_projected(const Vector& theta_hat, const Vector& raw_rate, double dt,
                         const SearchSpace& space) {
    const Vector rate = project_rate(theta_hat, raw_rate, space);
    return space.clamp(theta_hat + dt * rate);
}

}  // namespace cldnn
