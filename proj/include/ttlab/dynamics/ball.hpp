#pragma once

#include "ttlab/core/types.hpp"

namespace ttlab::dynamics {

/// Ball state in the table frame: x lateral, y along the table toward the
/// opponent, z up, origin at the table surface center.
struct BallState {
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
    Vec3 angular_velocity = Vec3::Zero();  ///< only read when Magnus is enabled
    double time = 0.0;
};

struct BallPhysicalParams {
    double mass = 0.0027;
    double radius = 0.020;
    double drag_coefficient = 0.47;
    double restitution = 0.9;
    double air_density = 1.2;
    bool magnus_enabled = false;
    double magnus_coefficient = 1.0;
    double linear_damping = 0.0;

    double cross_section() const;
    /// Throws InvalidArgument when a field is outside its physical range.
    void validate() const;
};

/// Internal integration substep. Flight is advanced in steps no longer than this.
inline constexpr double kFlightSubstep = 1e-3;

/// Instantaneous acceleration: gravity, quadratic drag, optional Magnus lift
/// and linear damping.
Vec3 flight_acceleration(const Vec3& velocity, const Vec3& angular_velocity,
                         const BallPhysicalParams& params);

/// Advances free flight by a signed interval using RK4 on substeps of at most
/// kFlightSubstep. Negative dt integrates backwards.
BallState integrate_flight(const BallState& state, const BallPhysicalParams& params, double dt);

/// One environment-level flight step; requires 0 < dt <= 0.01.
/// Throws NumericalDivergence if the state becomes non-finite.
BallState step_ball_flight(const BallState& state, const BallPhysicalParams& params, double dt);

/// Reflects the velocity component along `surface_normal`, scaling it by
/// `restitution`; the tangential component is kept. Requires a unit normal.
BallState bounce(const BallState& state, const Vec3& surface_normal, double restitution);

/// Terminal speed of a ball falling under gravity and quadratic drag.
double terminal_speed(const BallPhysicalParams& params);

/// Kinetic plus gravitational potential energy (zero potential at z = 0).
double mechanical_energy(const BallState& state, const BallPhysicalParams& params);

}  // namespace ttlab::dynamics
