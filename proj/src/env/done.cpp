#include "ttlab/env/done.hpp"

#include "ttlab/core/errors.hpp"

namespace ttlab::env {

void DoneSpec::validate() const {
    if (!(play_min.array() < play_max.array()).all()) throw ConfigError("done: play volume min must be below max");
    if (max_episode_steps < 1) throw ConfigError("done: max_episode_steps must be >= 1");
}

std::string_view to_string(DoneReason r) {
    switch (r) {
        case DoneReason::none: return "none";
        case DoneReason::win: return "win";
        case DoneReason::lose: return "lose";
        case DoneReason::out_of_play: return "out_of_play";
        case DoneReason::robot_collision: return "robot_collision";
        case DoneReason::truncated: return "truncated";
    }
    return "?";
}

DoneStatus check_done(const DoneSpec& spec, const StateMachineSpec& sm, const std::string& state,
                      const dynamics::BallState& ball, bool robot_collision, int steps_taken) {
    switch (sm.outcome(state)) {
        case PointOutcome::win: return {true, DoneReason::win};
        case PointOutcome::lose: return {true, DoneReason::lose};
        case PointOutcome::none: break;
    }
    if (robot_collision && spec.end_on_collision) return {true, DoneReason::robot_collision};
    const Vec3& p = ball.position;
    if ((p.array() < spec.play_min.array()).any() || (p.array() > spec.play_max.array()).any())
        return {true, DoneReason::out_of_play};
    if (steps_taken >= spec.max_episode_steps) return {true, DoneReason::truncated};
    return {};
}

}  // namespace ttlab::env
