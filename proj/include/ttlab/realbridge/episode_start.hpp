#pragma once

#include <optional>
#include <vector>

#include "ttlab/core/types.hpp"

namespace ttlab::realbridge {

/// One frame of a tracked ball.
struct BallSample {
    double t = 0.0;
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
};

/// Fills velocities by backward differences; the first frame copies the second's.
std::vector<BallSample> with_finite_difference_velocity(const std::vector<BallSample>& track);

struct Box3 {
    Vec3 min = Vec3::Zero();
    Vec3 max = Vec3::Zero();
    bool contains(const Vec3& p) const { return (p.array() >= min.array()).all() && (p.array() <= max.array()).all(); }
};

struct EpisodeStartParams {
    /// Region on the opponent half where incoming balls are first seen.
    Box3 region{Vec3(-1.0, 0.3, 0.0), Vec3(1.0, 2.5, 1.5)};
    double vy_threshold = -1.0;
    int debounce_frames = 2;
};

/// Time of the first frame of the first run of `debounce_frames` consecutive
/// frames inside the region with vy below the threshold.
std::optional<double> detect_episode_start(const std::vector<BallSample>& track, const EpisodeStartParams& params = {});

}  // namespace ttlab::realbridge
