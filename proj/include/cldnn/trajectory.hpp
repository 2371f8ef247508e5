#pragma once

#include "cldnn/dnn.hpp"

#include <string>

namespace cldnn {

enum class TrajectoryKind { Circular, Sinusoidal };

const char* trajectory_name(TrajectoryKind kind);
TrajectoryKind trajectory_from_name(const std::string& name);

/// Desired trajectory with analytic derivatives. Both built-ins use
/// amplitude 0.7 and angular frequency pi/4 on the position channel.
struct ReferenceTrajectory {
    TrajectoryKind kind = TrajectoryKind::Circular;
    double amplitude = 0.7;
    double omega = 0.0;  // pi/4 by default, set in make_trajectory
};

ReferenceTrajectory make_trajectory(TrajectoryKind kind);

struct ReferencePoint {
    Vector x_d;
    Vector xdot_d;
    Vector xdd_d;
};

ReferencePoint reference(const ReferenceTrajectory& traj, double t);

}  // namespace cldnn
