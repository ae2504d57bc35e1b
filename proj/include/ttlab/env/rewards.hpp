#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ttlab/dynamics/ball.hpp"
#include "ttlab/dynamics/kinematics.hpp"
#include "ttlab/dynamics/surfaces.hpp"
#include "ttlab/env/events.hpp"
#include "ttlab/env/state_machine.hpp"

namespace ttlab::env {

/// Everything a reward term may look at for one environment step.
struct RewardContext {
    int step_index = 0;
    std::span<const GameEvent> events;
    std::string_view state_before;
    std::string_view state_after;
    PointOutcome outcome = PointOutcome::none;
    bool episode_end = false;
    const dynamics::JointVector* joint_positions = nullptr;
    const dynamics::JointVector* joint_velocities = nullptr;
    const dynamics::PaddlePose* paddle = nullptr;
    const dynamics::BallState* ball = nullptr;
    const dynamics::SurfaceParams* surfaces = nullptr;
    const dynamics::KinematicChain* chain = nullptr;
};

/// Thresholds shared by the built-in terms.
struct RewardParams {
    /// Per-joint velocity limits. A list shorter than the joint count applies
    /// to the trailing joints; leading joints are unlimited.
    std::vector<double> velocity_limits{1.0, 2.0, 4.5, 4.5, 7.6, 10.7, 14.5};
    /// Limits on the per-step change of joint velocity.
    std::vector<double> acceleration_limits{0.2, 0.2, 1.0, 1.0, 1.0, 1.5, 2.5, 3.0};
    /// Limits on the per-step change of that change.
    std::vector<double> jerk_limits{0.92, 0.92, 1.76, 0.9, 0.95, 0.65, 1.5, 1.0};
    double joint_angle_buffer = 0.05;
    int base_joint = 2;
    double base_backwards_threshold = -2.0;
    double paddle_min_height = 0.125;
    double near_net_range = 2.0;
    double proximity_range = 0.5;
    double landing_range = 2.0;
};

/// A single reward term. Values are unweighted; the manager applies weights.
class RewardComponent {
public:
    virtual ~RewardComponent() = default;
    virtual void reset() {}
    virtual double step(const RewardContext& ctx) = 0;
    /// Largest total this term can contribute over one episode.
    virtual double max_per_episode() const = 0;
};

using RewardFactory = std::function<std::unique_ptr<RewardComponent>(const RewardParams&)>;

/// Adds a term to the global registry. Not thread-safe; call during startup.
void register_reward(const std::string& name, RewardFactory factory);
bool is_registered_reward(const std::string& name);
std::vector<std::string> registered_reward_names();

struct RewardTerm {
    std::string name;
    double weight = 1.0;
};

struct RewardSpec {
    std::vector<RewardTerm> terms;
    RewardParams params;

    /// Throws ConfigError on unknown or duplicate names and non-finite weights.
    void validate() const;

    /// Shaped training reward with maximum episode return 4.0.
    static RewardSpec shaped_default();
    /// Hit + land only; maximum 2.0.
    static RewardSpec evaluation();
};

struct RewardBreakdown {
    std::vector<std::pair<std::string, double>> components;  ///< weighted values
    double total = 0.0;
};

/// Owns one instance of every configured term for an episode.
class RewardManager {
public:
    explicit RewardManager(const RewardSpec& spec);

    void reset();
    RewardBreakdown step(const RewardContext& ctx);
    /// Sum over terms of weight * max_per_episode for positive weights.
    double max_return() const;

private:
    std::vector<std::pair<RewardTerm, std::unique_ptr<RewardComponent>>> terms_;
};

/// Convenience wrapper: sums the manager's step output.
RewardBreakdown compute_reward(RewardManager& manager, const RewardContext& ctx);

}  // namespace ttlab::env
