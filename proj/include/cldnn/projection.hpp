#pragma once

#include "cldnn/dnn.hpp"

#include <stdexcept>

namespace cldnn {

class ProjectionInvariantError : public std::runtime_error {
public:
    explicit ProjectionInvariantError(const std::string& what) : std::runtime_error(what) {}
};

/// Closed parameter ball of radius `radius` with a boundary layer of width
/// `smoothing` over which outward rates are attenuated.
struct SearchSpace {
    double radius = 1.0;     // theta_bar
    double smoothing = 0.05; // eps_proj, in (0, radius)

    static SearchSpace with_radius(double theta_bar) {
        return SearchSpace{theta_bar, 0.05 * theta_bar};
    }

    /// Attenuation factor in [0, 1]: 0 strictly inside the boundary layer,
    /// ramping to 1 at the ball surface.
    double ramp(double norm) const {
        const double s = (norm - (radius - smoothing)) / smoothing;
        return s <= 0.0 ? 0.0 : (s >= 1.0 ? 1.0 : s);
    }

    /// Radial retraction onto the ball; identity inside it.
    Vector clamp(const Vector& theta) const {
        const double norm = theta.norm();
        return norm > radius ? Vector((radius / norm) * theta) : theta;
    }
};

/// Smooth ball projection of an adaptation rate: the outward radial
/// component of `raw_rate` is scaled by 1 - ramp(|theta_hat|); inward and
/// tangential components pass through. Throws if theta_hat is outside the
/// ball beyond numerical slack.
Vector project_rate(const Vector& theta_hat, const Vector& raw_rate, const SearchSpace& space);

/// One explicit Euler step of theta driven by a projected rate, followed by
/// radial retraction so the iterate can never leave the ball.
Vector advance_projected(const Vector& theta_hat, const Vector& raw_rate, double dt,
                         const SearchSpace& space);

}  // namespace cldnn
