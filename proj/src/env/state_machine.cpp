#include "ttlab/env/state_machine.hpp"

#include <algorithm>

#include "ttlab/core/errors.hpp"

namespace ttlab::env {

bool StateMachineSpec::declared(const std::string& s) const {
    return std::find(states.begin(), states.end(), s) != states.end();
}

PointOutcome StateMachineSpec::outcome(const std::string& s) const {
    auto it = terminal.find(s);
    return it == terminal.end() ? PointOutcome::none : it->second;
}

void StateMachineSpec::validate() const {
    auto need = [&](const std::string& s, const char* role) {
        if (!declared(s)) throw ConfigError(std::string("state machine: ") + role + " state '" + s + "' is not declared");
    };
    if (states.empty()) throw ConfigError("state machine: no states declared");
    need(initial, "initial");
    need(fallback, "fallback");
    if (!is_terminal(fallback)) throw ConfigError("state machine: fallback state must be terminal");
    for (const auto& [key, next] : transitions) {
        need(key.first, "transition source");
        need(next, "transition target");
    }
    for (const auto& [from, to] : immediate) {
        need(from, "immediate source");
        need(to, "immediate target");
    }
    for (const auto& [s, outcome] : terminal) {
        need(s, "terminal");
        if (outcome == PointOutcome::none) throw ConfigError("state machine: terminal state '" + s + "' has no outcome");
    }
    // Immediate chains must end.
    for (const auto& [from, to] : immediate) {
        std::string s = from;
        for (std::size_t hops = 0; immediate.count(s); ++hops) {
            if (hops > immediate.size()) throw ConfigError("state machine: immediate transitions form a cycle");
            s = immediate.at(s);
        }
    }
}

StateMachineSpec StateMachineSpec::ball_return() {
    StateMachineSpec s;
    s.states = {"P1_LAUNCH", "P1_TABLE", "P1_PADDLE", "P1_NET", "P2_TABLE", "DONE_P1_WINPOINT", "DONE_P1_LOSEPOINT"};
    s.initial = "P1_LAUNCH";
    s.fallback = "DONE_P1_LOSEPOINT";
    s.transitions[{"P1_LAUNCH", EventKind::TABLE_ARM}] = "P1_TABLE";
    s.transitions[{"P1_TABLE", EventKind::PADDLE_ARM}] = "P1_PADDLE";
    s.transitions[{"P1_PADDLE", EventKind::TABLE_OPP}] = "P2_TABLE";
    s.transitions[{"P1_PADDLE", EventKind::NET}] = "P1_NET";
    s.transitions[{"P1_NET", EventKind::TABLE_OPP}] = "P2_TABLE";
    s.immediate["P2_TABLE"] = "DONE_P1_WINPOINT";
    s.terminal["DONE_P1_WINPOINT"] = PointOutcome::win;
    s.terminal["DONE_P1_LOSEPOINT"] = PointOutcome::lose;
    return s;
}

std::string transition(const StateMachineSpec& spec, const std::string& current, const GameEvent& event) {
    if (spec.is_terminal(current)) throw InvalidArgument("state machine: transition requested from terminal state '" + current + "'");
    auto it = spec.transitions.find({current, event.kind});
    return it == spec.transitions.end() ? spec.fallback : it->second;
}

std::string settle(const StateMachineSpec& spec, std::string state) {
    for (auto it = spec.immediate.find(state); it != spec.immediate.end(); it = spec.immediate.find(state)) {
        state = it->second;
    }
    return state;
}

}  // namespace ttlab::env
