#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ttlab/env/table_tennis_env.hpp"

namespace ttlab::env {

/// Version of the JSON-lines layout, written into every header line.
inline constexpr int kEpisodeLogSchema = 1;

struct LoggedStep {
    VecX action;
    StepInfo info;
    double reward = 0.0;
    bool done = false;
};

/// Per-episode record written as JSON lines: one header line, then one line per step.
class EpisodeLog {
public:
    void begin(const TableTennisEnv& env, std::uint64_t episode_seed);
    void record(const VecX& action, const StepResult& result);

    const std::vector<LoggedStep>& steps() const { return steps_; }
    double episode_return() const;

    void write_jsonl(std::ostream& os) const;
    void write_jsonl(const std::string& path) const;

private:
    std::uint64_t seed_ = 0;
    dynamics::BallState launch_;
    fidelity::EpisodeLatencies latencies_;
    std::vector<LoggedStep> steps_;
};

}  // namespace ttlab::env
