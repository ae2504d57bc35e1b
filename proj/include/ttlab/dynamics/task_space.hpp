#pragma once

#include "ttlab/dynamics/ball.hpp"
#include "ttlab/dynamics/kinematics.hpp"

namespace ttlab::dynamics {

/// Damped-least-squares task-space controller settings.
struct TaskSpaceParams {
    double damping = 0.01;  ///< lambda in J^T (J J^T + lambda^2 I)^-1
    double gain = 10.0;     ///< proportional gain k_p, 1/s
    Vec3 cube_min{-1.2, -2.2, 0.05};
    Vec3 cube_max{1.2, -0.9, 0.9};
};

struct TaskCommand {
    JointVector velocities = JointVector::Zero();
    bool clamped = false;  ///< target position was outside the bounding cube
};

/// Pose error (target - current) in task coordinates; angle terms wrapped to (-pi, pi].
TaskVector task_error(const PaddlePose& current, const TaskVector& target);

/// Joint velocities that drive the paddle toward `target` (x, y, z, roll, yaw).
/// Targets outside the bounding cube are clamped onto it. The result is scaled
/// uniformly so no joint exceeds its velocity limit.
TaskCommand task_space_command(const KinematicChain& chain, const JointVector& q, const TaskVector& target,
                               const TaskSpaceParams& params = {});

/// Ball/paddle contact outcome. `contact` is false when the ball is not
/// approaching the paddle face, in which case `ball` is unchanged.
struct ContactResult {
    BallState ball;
    bool contact = false;
};

/// Reflects the ball velocity relative to the paddle about the paddle normal
/// with restitution e, then adds the paddle velocity back.
ContactResult paddle_contact(const BallState& ball, const PaddlePose& paddle, double restitution);

}  // namespace ttlab::dynamics
