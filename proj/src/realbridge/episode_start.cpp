#include "ttlab/realbridge/episode_start.hpp"

namespace ttlab::realbridge {

std::vector<BallSample> with_finite_difference_velocity(const std::vector<BallSample>& track) {
    std::vector<BallSample> out = track;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double dt = out[i].t - out[i - 1].t;
        out[i].velocity = dt > 0.0 ? Vec3((out[i].position - out[i - 1].position) / dt) : out[i - 1].velocity;
    }
    if (out.size() > 1) out[0].velocity = out[1].velocity;
    return out;
}

std::optional<double> detect_episode_start(const std::vector<BallSample>& track, const EpisodeStartParams& params) {
    int run = 0;
    for (std::size_t i = 0; i < track.size(); ++i) {
        const auto& s = track[i];
        if (params.region.contains(s.position) && s.velocity.y() < params.vy_threshold) {
            if (++run >= params.debounce_frames) return track[i + 1 - run].t;
        } else {
            run = 0;
        }
    }
    return std::nullopt;
}

}  // namespace ttlab::realbridge
