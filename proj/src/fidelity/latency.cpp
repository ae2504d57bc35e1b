#include "ttlab/fidelity/latency.hpp"

#include <algorithm>
#include <cmath>

#include "ttlab/core/errors.hpp"

namespace ttlab::fidelity {

std::string_view to_string(LatencyComponent c) {
    switch (c) {
        case LatencyComponent::ball_obs: return "ball_obs";
        case LatencyComponent::arm_obs: return "arm_obs";
        case LatencyComponent::gantry_obs: return "gantry_obs";
        case LatencyComponent::arm_action: return "arm_action";
        case LatencyComponent::gantry_action: return "gantry_action";
    }
    return "?";
}

LatencyModel LatencyModel::measured() {
    LatencyModel m;
    m.components = {{{40.0, 8.2}, {29.0, 8.2}, {33.0, 9.0}, {71.0, 5.7}, {64.5, 11.5}}};
    return m;
}

LatencyModel LatencyModel::zero() { return {}; }

LatencyStats LatencyModel::effective(LatencyComponent c) const {
    const LatencyStats& s = components[static_cast<int>(c)];
    return {s.mean_ms * scale, s.stddev_ms * std::sqrt(scale)};
}

void LatencyModel::validate() const {
    if (!(scale >= 0.0)) throw InvalidArgument("latency scale must be non-negative");
    for (const auto& s : components) {
        if (!(s.mean_ms >= 0.0) || !(s.stddev_ms >= 0.0))
            throw InvalidArgument("latency mean and stddev must be non-negative");
    }
}

EpisodeLatencies sample_episode_latencies(const LatencyModel& model, Rng& rng) {
    EpisodeLatencies out;
    for (int i = 0; i < kLatencyComponents; ++i) {
        const LatencyStats s = model.effective(static_cast<LatencyComponent>(i));
        // Always consume a draw so the stream does not depend on the settings.
        const double z = standard_normal(rng);
        out.seconds[i] = std::max(0.0, s.mean_ms + s.stddev_ms * z) * 1e-3;
    }
    return out;
}

}  // namespace ttlab::fidelity
