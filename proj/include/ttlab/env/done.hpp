#pragma once

#include <string>
#include <string_view>

#include "ttlab/dynamics/ball.hpp"
#include "ttlab/env/state_machine.hpp"

namespace ttlab::env {

struct DoneSpec {
    Vec3 play_min{-3.0, -4.0, -0.76};
    Vec3 play_max{3.0, 4.0, 4.0};
    int max_episode_steps = 200;
    bool end_on_collision = true;

    void validate() const;
};

enum class DoneReason { none, win, lose, out_of_play, robot_collision, truncated };
std::string_view to_string(DoneReason r);

struct DoneStatus {
    bool done = false;
    DoneReason reason = DoneReason::none;
};

/// Episode termination after `steps_taken` steps.
DoneStatus check_done(const DoneSpec& spec, const StateMachineSpec& sm, const std::string& state,
                      const dynamics::BallState& ball, bool robot_collision, int steps_taken);

}  // namespace ttlab::env
