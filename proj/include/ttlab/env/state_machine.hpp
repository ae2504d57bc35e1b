#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ttlab/env/events.hpp"

namespace ttlab::env {

enum class PointOutcome { none, win, lose };

/// Game progress as a table of (state, event) -> next_state triplets.
///
/// States listed in `terminal` end the episode with the given outcome. An
/// `immediate` entry moves on from a state without waiting for an event, which
/// is how a bookkeeping state such as P2_TABLE resolves to the winning state.
/// Any (state, event) pair missing from the table leads to `fallback`.
struct StateMachineSpec {
    std::vector<std::string> states;
    std::string initial = "P1_LAUNCH";
    std::string fallback = "DONE_P1_LOSEPOINT";
    std::map<std::pair<std::string, EventKind>, std::string> transitions;
    std::map<std::string, std::string> immediate;
    std::map<std::string, PointOutcome> terminal;

    bool declared(const std::string& state) const;
    bool is_terminal(const std::string& state) const { return terminal.count(state) != 0; }
    PointOutcome outcome(const std::string& state) const;

    /// Throws ConfigError if a referenced state is undeclared.
    void validate() const;

    /// Ball return task: launch, bounce on own side, hit, land on the opponent
    /// side (optionally clipping the net first).
    static StateMachineSpec ball_return();
};

/// Next state for an event. Throws InvalidArgument when `current` is terminal.
std::string transition(const StateMachineSpec& spec, const std::string& current, const GameEvent& event);

/// Follows immediate transitions until a state that waits for an event.
std::string settle(const StateMachineSpec& spec, std::string state);

}  // namespace ttlab::env
