#pragma once

#include <cstdint>

#include "ttlab/dynamics/ball.hpp"
#include "ttlab/dynamics/kinematics.hpp"
#include "ttlab/dynamics/surfaces.hpp"
#include "ttlab/dynamics/task_space.hpp"
#include "ttlab/env/done.hpp"
#include "ttlab/env/launch.hpp"
#include "ttlab/env/rewards.hpp"
#include "ttlab/env/state_machine.hpp"
#include "ttlab/fidelity/latency.hpp"
#include "ttlab/fidelity/noise.hpp"
#include "ttlab/fidelity/randomization.hpp"

namespace ttlab::env {

enum class ActionMode { joint_velocity, task_position };
enum class ObservationMode { joint, task };

inline constexpr int kHistoryLength = 8;

struct FidelityConfig {
    fidelity::LatencyModel latency = fidelity::LatencyModel::measured();
    fidelity::NoiseModel noise;
    fidelity::RandomizationSpec randomization;
    int buffer_capacity = 256;  ///< samples per sensor buffer (pushed at 1 kHz)
};

/// Complete declarative description of one environment.
struct EnvConfig {
    int control_hz = 100;
    ActionMode action_mode = ActionMode::joint_velocity;
    ObservationMode observation_mode = ObservationMode::joint;
    StateMachineSpec state_machine = StateMachineSpec::ball_return();
    RewardSpec rewards = RewardSpec::shaped_default();
    DoneSpec done;  ///< holds max_episode_steps (default 200)
    BallDistribution ball_distribution = BallDistribution::thrower();
    dynamics::BallPhysicalParams ball;
    dynamics::SurfaceParams surfaces;
    dynamics::KinematicChain chain = dynamics::KinematicChain::default_robot();
    dynamics::TaskSpaceParams task_space;
    FidelityConfig fidelity;
    dynamics::JointVector home = dynamics::JointVector::Zero();
    double home_perturbation = 0.01;  ///< uniform +/- per joint at reset
    std::uint64_t seed = 0;

    int max_episode_steps() const { return done.max_episode_steps; }
    /// Throws ConfigError (or InvalidArgument from nested params) on bad values.
    void validate() const;
};

}  // namespace ttlab::env
