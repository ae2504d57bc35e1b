#pragma once

#include "ttlab/core/rng.hpp"
#include "ttlab/core/types.hpp"

namespace ttlab::fidelity {

/// Additive ball-position noise: uniform(-half_width, +half_width) + bias per axis.
struct NoiseModel {
    Vec3 half_width = Vec3::Constant(0.04);
    Vec3 bias = Vec3::Zero();

    void validate() const;
};

Vec3 apply_observation_noise(const Vec3& ball_position, const NoiseModel& model, Rng& rng);

}  // namespace ttlab::fidelity
