#pragma once

#include <optional>
#include <string>

#include "ttlab/trainer/policy.hpp"
#include "ttlab/trainer/running_norm.hpp"

namespace ttlab::trainer {

inline constexpr int kCheckpointVersion = 1;

/// Everything needed to resume training or evaluate a policy.
struct Checkpoint {
    int version = kCheckpointVersion;
    int iteration = 0;  ///< iterations completed
    std::optional<PolicySpec> policy;
    VecX theta;
    RunningNorm norm;
    std::string rng_state;  ///< perturbation sampler state, textual mt19937_64 form
    bool solved = false;
    int solve_iteration = -1;
};

std::string serialize_checkpoint(const Checkpoint& c);
Checkpoint parse_checkpoint(const std::string& text);
void save_checkpoint(const Checkpoint& c, const std::string& path);
/// Throws Error naming the path when the file is missing or malformed.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ttlab::trainer
