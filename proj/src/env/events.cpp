#include "ttlab/env/events.hpp"

#include <array>

namespace ttlab::env {
namespace {

constexpr std::array<std::string_view, kEventKinds> kNames = {"TABLE_ARM", "TABLE_OPP", "PADDLE_ARM", "NET",
                                                              "GROUND",    "TABLE",     "STAND",      "LAUNCH"};

}  // namespace

std::string_view to_string(EventKind k) { return kNames[static_cast<int>(k)]; }

std::optional<EventKind> event_kind_from_string(std::string_view s) {
    for (int i = 0; i < kEventKinds; ++i) {
        if (kNames[i] == s) return static_cast<EventKind>(i);
    }
    return std::nullopt;
}

}  // namespace ttlab::env
