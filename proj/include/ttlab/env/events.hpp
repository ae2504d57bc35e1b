#pragma once

#include <optional>
#include <string_view>

#include "ttlab/core/types.hpp"

namespace ttlab::env {

enum class EventKind {
    TABLE_ARM,   ///< ball bounced on the robot's half of the table
    TABLE_OPP,   ///< ball bounced on the opponent's half
    PADDLE_ARM,  ///< ball touched the robot paddle
    NET,
    GROUND,
    TABLE,  ///< robot touched the table
    STAND,  ///< robot touched its stand
    LAUNCH,
};
inline constexpr int kEventKinds = 8;

std::string_view to_string(EventKind k);
std::optional<EventKind> event_kind_from_string(std::string_view s);

struct GameEvent {
    EventKind kind = EventKind::LAUNCH;
    double time = 0.0;
    Vec3 position = Vec3::Zero();
};

inline bool is_robot_collision(EventKind k) { return k == EventKind::TABLE || k == EventKind::STAND; }

}  // namespace ttlab::env
