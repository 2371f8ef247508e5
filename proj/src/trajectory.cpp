#include "cldnn/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cldnn {

const char* trajectory_name(TrajectoryKind kind) {
    return kind == TrajectoryKind::Circular ? "circular" : "sinusoidal";
}

TrajectoryKind trajectory_from_name(const std::string& name) {
    if (name == "circular") return TrajectoryKind::Circular;
    if (name == "sinusoidal") return TrajectoryKind::Sinusoidal;
    throw std::invalid_argument("unknown trajectory: " + name);
}

ReferenceTrajectory make_trajectory(TrajectoryKind kind) {
    ReferenceTrajectory traj;
    traj.kind = kind;
    traj.omega = std::numbers::pi / 4.0;
    return traj;
}

ReferencePoint reference(const ReferenceTrajectory& traj, double t) {
    const double a = traj.amplitude;
    const double w = traj.omega;
    const double s = std::sin(w * t);
    const double c = std::cos(w * t);
    ReferencePoint p{Vector(2), Vector(2), Vector(2)};
    if (traj.kind == TrajectoryKind::Circular) {
        p.x_d << a * c, a * s;
        p.xdot_d << -a * w * s, a * w * c;
        p.xdd_d << -a * w * w * c, -a * w * w * s;
    } else {
        // [a sin(wt), w sin(wt)]: the second channel rides the same phase
        // with amplitude equal to the angular frequency.
        p.x_d << a * s, w * s;
        p.xdot_d << a * w * c, w * w * c;
        p.xdd_d << -a * w * w * s, -w * w * w * s;
    }
    return p;
}

}  // namespace cldnn
