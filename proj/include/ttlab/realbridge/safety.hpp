#pragma once

#include "ttlab/dynamics/kinematics.hpp"

namespace ttlab::realbridge {

struct SafetyLimits {
    Vec3 cube_min{-1.5, -2.6, 0.0};
    Vec3 cube_max{1.5, -0.2, 1.3};
    double min_paddle_height = 0.0;  ///< table height
    double lookahead = 0.25;         ///< s
    double step = 0.01;              ///< control period the position target is integrated over

    void validate() const;
};

/// Position target plus velocity, the pair sent to the position/velocity controller.
struct SafeCommand {
    dynamics::JointVector position = dynamics::JointVector::Zero();
    dynamics::JointVector velocity = dynamics::JointVector::Zero();
    bool modified = false;
};

/// Makes a joint velocity command safe.
///
/// 1. Joint limits: each joint velocity is capped to its velocity limit, and
///    where q + v * lookahead would cross a position limit, v is scaled so the
///    prediction lands on the limit.
/// 2. Paddle region: if the paddle predicted over the lookahead leaves the
///    cube or drops below the minimum height, the Cartesian velocity along
///    each violated face's outward normal is removed through the position
///    Jacobian's pseudo-inverse.
/// 3. The command is then checked on the full kinematics at the next step
///    and at the lookahead; while a check fails it is halved, down to zero.
///
/// A state that already violates a constraint only admits motion that does
/// not deepen the violation.
SafeCommand filter_command_safety(const dynamics::KinematicChain& chain, const dynamics::JointVector& q,
                                  const dynamics::JointVector& velocity, const SafetyLimits& limits = {});

}  // namespace ttlab::realbridge
