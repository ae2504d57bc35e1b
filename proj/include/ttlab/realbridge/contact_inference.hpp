#pragma once

#include <vector>

#include "ttlab/dynamics/kinematics.hpp"
#include "ttlab/dynamics/surfaces.hpp"
#include "ttlab/env/events.hpp"
#include "ttlab/realbridge/episode_start.hpp"

namespace ttlab::realbridge {

struct PaddleSample {
    double t = 0.0;
    dynamics::PaddlePose pose;
};

struct ContactThresholds {
    double ball_radius = 0.02;
    double table_band = 0.03;   ///< |z - (table + radius)| at the lowest frame
    double paddle_band = 0.05;  ///< distance from the paddle plane
    double paddle_rim = 0.03;   ///< slack beyond the paddle radius
    double ground_band = 0.05;  ///< height above the floor
    double net_band = 0.05;     ///< distance from the net plane for a rebound
    int refractory_frames = 3;
};

/// Referee heuristics on a tracked ball. Velocities are taken from position
/// differences. A frame that would produce events of two different kinds
/// produces none. `paddle` may be empty, in which case no paddle contacts are
/// reported; otherwise the sample nearest in time to each ball frame is used.
std::vector<env::GameEvent> infer_contact_events(const std::vector<BallSample>& ball,
                                                 const std::vector<PaddleSample>& paddle,
                                                 const dynamics::SurfaceParams& surfaces,
                                                 const ContactThresholds& thresholds = {});

}  // namespace ttlab::realbridge
