#include "ttlab/dynamics/ball.hpp"

#include <cmath>

#include "ttlab/core/errors.hpp"

namespace ttlab::dynamics {

double BallPhysicalParams::cross_section() const { return M_PI * radius * radius; }

void BallPhysicalParams::validate() const {
    if (!(mass > 0.0)) throw InvalidArgument("ball mass must be positive");
    if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
    if (!(drag_coefficient >= 0.0)) throw InvalidArgument("drag coefficient must be non-negative");
    if (!(restitution >= 0.0 && restitution <= 1.2))
        throw InvalidArgument("ball restitution must lie in [0, 1.2]");
    if (!(air_density >= 0.0)) throw InvalidArgument("air density must be non-negative");
    if (!(linear_damping >= 0.0)) throw InvalidArgument("linear damping must be non-negative");
}

Vec3 flight_acceleration(const Vec3& v, const Vec3& w, const BallPhysicalParams& p) {
    const double area = p.cross_section();
    Vec3 a = gravity_vector();
    a -= (0.5 * p.air_density * p.drag_coefficient * area * v.norm() / p.mass) * v;
    if (p.magnus_enabled) {
        a += (p.magnus_coefficient * p.air_density * area * p.radius / p.mass) * w.cross(v);
    }
    a -= p.linear_damping * v;
    return a;
}

BallState integrate_flight(const BallState& state, const BallPhysicalParams& params, double dt) {
    BallState s = state;
    if (dt == 0.0) return s;
    const int n = static_cast<int>(std::ceil(std::abs(dt) / kFlightSubstep - 1e-9));
    const double h = dt / n;
    const Vec3& w = s.angular_velocity;
    for (int i = 0; i < n; ++i) {
        const Vec3 x0 = s.position;
        const Vec3 v0 = s.velocity;
        const Vec3 k1v = flight_acceleration(v0, w, params);
        const Vec3 v1 = v0 + 0.5 * h * k1v;
        const Vec3 k2v = flight_acceleration(v1, w, params);
        const Vec3 v2 = v0 + 0.5 * h * k2v;
        const Vec3 k3v = flight_acceleration(v2, w, params);
        const Vec3 v3 = v0 + h * k3v;
        const Vec3 k4v = flight_acceleration(v3, w, params);
        s.position = x0 + (h / 6.0) * (v0 + 2.0 * v1 + 2.0 * v2 + v3);
        s.velocity = v0 + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    s.time = state.time + dt;
    return s;
}

BallState step_ball_flight(const BallState& state, const BallPhysicalParams& params, double dt) {
    if (!(dt > 0.0 && dt <= 0.01 + 1e-15))
        throw InvalidArgument("flight step must satisfy 0 < dt <= 0.01 s");
    BallState next = integrate_flight(state, params, dt);
    if (!next.position.allFinite() || !next.velocity.allFinite())
        throw NumericalDivergence("ball state became non-finite");
    return next;
}

BallState bounce(const BallState& state, const Vec3& n, double restitution) {
    if (std::abs(n.norm() - 1.0) > 1e-9) throw InvalidArgument("bounce normal must be unit length");
    BallState out = state;
    const double vn = state.velocity.dot(n);
    out.velocity = state.velocity - (1.0 + restitution) * vn * n;
    return out;
}

double terminal_speed(const BallPhysicalParams& p) {
    return std::sqrt(2.0 * p.mass * kGravity /
                     (p.air_density * p.drag_coefficient * p.cross_section()));
}

double mechanical_energy(const BallState& s, const BallPhysicalParams& p) {
    return 0.5 * p.mass * s.velocity.squaredNorm() + p.mass * kGravity * s.position.z();
}

}  // namespace ttlab::dynamics

#include "ttlab/dynamics/surfaces.hpp"

namespace ttlab::dynamics {

void SurfaceParams::validate() const {
    auto restitution_ok = [](double e) { return e >= 0.0 && e <= 1.2; };
    if (!restitution_ok(table_restitution) || !restitution_ok(paddle_restitution) || !restitution_ok(net_restitution))
        throw InvalidArgument("surface restitutions must lie in [0, 1.2]");
    if (!(table_half_width > 0.0 && table_half_length > 0.0 && net_height > 0.0 && paddle_radius > 0.0))
        throw InvalidArgument("table, net and paddle geometry must be positive");
    if (!(paddle_mass > 0.0)) throw InvalidArgument("paddle mass must be positive");
    if (!(floor_height < table_height)) throw InvalidArgument("floor must lie below the table surface");
}

}  // namespace ttlab::dynamics
