#pragma once

#include <array>
#include <string_view>

#include "ttlab/core/rng.hpp"

namespace ttlab::fidelity {

enum class LatencyComponent { ball_obs = 0, arm_obs, gantry_obs, arm_action, gantry_action };
inline constexpr int kLatencyComponents = 5;

std::string_view to_string(LatencyComponent c);

struct LatencyStats {
    double mean_ms = 0.0;
    double stddev_ms = 0.0;
};

/// Per-component Gaussian latency. `scale` multiplies the means and the
/// variances, so a 50% model has mean/2 and stddev/sqrt(2).
struct LatencyModel {
    std::array<LatencyStats, kLatencyComponents> components{};
    double scale = 1.0;

    /// Values measured on the physical system (ms): ball 40/8.2, arm obs
    /// 29/8.2, gantry obs 33/9.0, arm action 71/5.7, gantry action 64.5/11.5.
    static LatencyModel measured();
    static LatencyModel zero();

    LatencyStats effective(LatencyComponent c) const;
    void validate() const;
};

/// One latency per component in seconds, fixed for an episode.
struct EpisodeLatencies {
    std::array<double, kLatencyComponents> seconds{};
    double operator[](LatencyComponent c) const { return seconds[static_cast<int>(c)]; }
};

/// One clamped-at-zero Gaussian draw per component.
EpisodeLatencies sample_episode_latencies(const LatencyModel& model, Rng& rng);

}  // namespace ttlab::fidelity
