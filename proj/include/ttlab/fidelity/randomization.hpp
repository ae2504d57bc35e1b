#pragma once

#include "ttlab/core/rng.hpp"
#include "ttlab/dynamics/ball.hpp"
#include "ttlab/dynamics/surfaces.hpp"

namespace ttlab::fidelity {

struct UniformRange {
    double center = 0.0;
    double half_range = 0.0;
};

/// Per-episode domain randomization of physical parameters.
struct RandomizationSpec {
    UniformRange table_restitution{0.9, 0.15};
    UniformRange paddle_restitution{0.7, 0.15};
    UniformRange ball_restitution{0.9, 0.0};
    UniformRange paddle_mass{0.08, 0.0};

    void validate() const;
};

struct RandomizedPhysics {
    dynamics::SurfaceParams surfaces;
    dynamics::BallPhysicalParams ball;
};

/// Draws every randomized parameter uniformly in its range and writes it over
/// the base values; everything else is copied through.
RandomizedPhysics randomize_physics(const RandomizationSpec& spec, const dynamics::SurfaceParams& base_surfaces,
                                    const dynamics::BallPhysicalParams& base_ball, Rng& rng);

}  // namespace ttlab::fidelity
