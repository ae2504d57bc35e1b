#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ttlab/core/rng.hpp"
#include "ttlab/env/config.hpp"
#include "ttlab/fidelity/timed_buffer.hpp"

namespace ttlab::env {

/// Simulation times (s) at which each stage of the step pipeline read or wrote data.
struct StageTimes {
    double ball_observed = 0.0;     ///< true time the observed ball sample refers to
    double arm_observed = 0.0;
    double gantry_observed = 0.0;
    double policy = 0.0;            ///< time the observation was handed to the policy
    double arm_action_applied = 0.0;   ///< first substep the action reached the arm
    double gantry_action_applied = 0.0;
};

struct StepInfo {
    int step_index = 0;
    double time = 0.0;
    std::string state;
    std::vector<GameEvent> events;
    RewardBreakdown reward;
    DoneReason done_reason = DoneReason::none;
    StageTimes stages;
};

struct StepResult {
    VecX observation;
    double reward = 0.0;
    bool done = false;
    StepInfo info;
};

/// True state after each 1 ms physics substep. Only produced when an observer is set.
struct SubstepTrace {
    double time = 0.0;
    dynamics::BallState ball;
    dynamics::JointVector joints;
    dynamics::JointVector joint_velocities;
    dynamics::PaddlePose paddle;
    std::vector<GameEvent> events;
};

/// Ball-return table tennis environment with a gantry-mounted arm.
///
/// Physics advances in 1 ms substeps. Actions are held in a timed buffer and
/// read back with the sampled per-episode actuation latency; observations are
/// read from 1 kHz sensor buffers with the observation latencies, and the ball
/// position is corrupted by the configured noise.
class TableTennisEnv {
public:
    explicit TableTennisEnv(EnvConfig config);

    /// Starts an episode from the environment's own random stream.
    VecX reset();
    /// Reseeds the random stream, then resets.
    VecX reset(std::uint64_t seed);
    StepResult step(const VecX& action);

    int observation_dim() const;
    int action_dim() const;
    int feature_dim() const;
    double control_dt() const { return 1.0 / config_.control_hz; }
    double max_return() const { return rewards_.max_return(); }
    const EnvConfig& config() const { return config_; }

    bool episode_active() const { return active_; }
    double time() const { return time_; }
    int steps_taken() const { return steps_; }
    const std::string& state() const { return state_; }
    const dynamics::BallState& ball() const { return ball_; }
    const dynamics::JointVector& joint_positions() const { return q_; }
    const dynamics::JointVector& joint_velocities() const { return qd_; }
    dynamics::PaddlePose paddle() const;
    const dynamics::BallState& launch_state() const { return launch_; }
    const fidelity::EpisodeLatencies& latencies() const { return latencies_; }
    const fidelity::RandomizedPhysics& physics() const { return physics_; }
    /// Home paddle pose in task coordinates; task-space actions are offsets from it.
    const dynamics::TaskVector& home_task() const { return home_task_; }

    void set_substep_observer(std::function<void(const SubstepTrace&)> observer) {
        observer_ = std::move(observer);
    }

private:
    void push_sensors();
    VecX observe(StageTimes& stages);
    void substep(double h, std::vector<GameEvent>& events, bool& collided);
    void advance_ball(double h, const dynamics::PaddlePose& p0, const dynamics::PaddlePose& p1,
                      std::vector<GameEvent>& events);
    void emit(EventKind kind, double t, const Vec3& where, std::vector<GameEvent>& events);

    EnvConfig config_;
    RewardManager rewards_;
    Rng rng_;
    dynamics::TaskVector home_task_ = dynamics::TaskVector::Zero();

    bool active_ = false;
    bool ball_frozen_ = false;
    double time_ = 0.0;
    int steps_ = 0;
    std::string state_;
    dynamics::BallState ball_;
    dynamics::BallState launch_;
    dynamics::JointVector q_ = dynamics::JointVector::Zero();
    dynamics::JointVector qd_ = dynamics::JointVector::Zero();
    fidelity::EpisodeLatencies latencies_;
    fidelity::RandomizedPhysics physics_;

    fidelity::TimedBuffer ball_buffer_;
    fidelity::TimedBuffer arm_buffer_;
    fidelity::TimedBuffer gantry_buffer_;
    fidelity::TimedBuffer action_buffer_;
    std::vector<VecX> history_;  ///< oldest first, kHistoryLength entries
    std::vector<double> scratch_;

    std::function<void(const SubstepTrace&)> observer_;
};

}  // namespace ttlab::env
