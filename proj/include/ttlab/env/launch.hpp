#pragma once

#include <string>
#include <vector>

#include "ttlab/core/errors.hpp"
#include "ttlab/core/rng.hpp"
#include "ttlab/dynamics/ball.hpp"
#include "ttlab/dynamics/surfaces.hpp"

namespace ttlab::env {

struct Interval {
    double min = 0.0;
    double max = 0.0;
};

/// Box of initial ball conditions plus the landing region on the robot side
/// that an accepted launch must hit.
struct BallDistribution {
    Interval vel_x, vel_y, vel_z;
    Interval pos_x, pos_y, pos_z;
    Interval land_x, land_y;

    void validate() const;

    static BallDistribution thrower();   ///< baseline thrower
    static BallDistribution medium();
    static BallDistribution wide();
    static BallDistribution tiny();
    static BallDistribution thrower2();
    /// Baseline box with the y velocity moved to a range disjoint from it.
    static BallDistribution velocity_offset();
    /// Named preset lookup; throws ConfigError for unknown names.
    static BallDistribution preset(const std::string& name);
    static std::vector<std::string> preset_names();
};

class InfeasibleDistribution : public Error {
public:
    InfeasibleDistribution() : Error("infeasible distribution: no launch landed in bounds after 100 attempts") {}
};

inline constexpr int kMaxLaunchAttempts = 100;

/// Where a ball-only flight first reaches the table plane, if it does within 3 s.
struct Landing {
    bool reached = false;
    double x = 0.0;
    double y = 0.0;
};
Landing simulate_landing(const dynamics::BallState& launch, const dynamics::BallPhysicalParams& ball,
                         const dynamics::SurfaceParams& surfaces);

/// Uniform per-axis draw, rejection-sampled until the robot-free flight lands
/// inside the landing bounds. Throws InfeasibleDistribution after 100 tries.
dynamics::BallState sample_launch(const BallDistribution& dist, const dynamics::BallPhysicalParams& ball,
                                  const dynamics::SurfaceParams& surfaces, Rng& rng);

}  // namespace ttlab::env
