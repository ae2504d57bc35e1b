#include "ttlab/env/launch.hpp"

namespace ttlab::env {
namespace {

void check(const Interval& i, const char* name) {
    if (!(i.min <= i.max)) throw ConfigError(std::string("ball distribution: ") + name + " min exceeds max");
}

double draw(const Interval& i, Rng& rng) { return uniform(rng, i.min, i.max); }

}  // namespace

void BallDistribution::validate() const {
    check(vel_x, "vel_x");
    check(vel_y, "vel_y");
    check(vel_z, "vel_z");
    check(pos_x, "pos_x");
    check(pos_y, "pos_y");
    check(pos_z, "pos_z");
    check(land_x, "land_x");
    check(land_y, "land_y");
}

BallDistribution BallDistribution::thrower() {
    return {{-0.44, 0.44}, {-7.25, -6.47}, {-0.24, 0.46}, {0.30, 0.41}, {1.47, 1.94},
            {0.55, 0.61},  {0.18, 0.42},   {-0.73, -0.37}};
}
BallDistribution BallDistribution::medium() {
    return {{-0.55, 0.55}, {-7.45, -6.27}, {-0.42, 0.63}, {0.28, 0.43}, {1.35, 2.05},
            {0.54, 0.63},  {0.12, 0.48},   {-0.82, -0.28}};
}
BallDistribution BallDistribution::wide() {
    return {{-0.87, 0.87}, {-8.04, -5.68}, {-0.95, 1.16}, {0.20, 0.51}, {1.00, 2.40},
            {0.50, 0.67},  {-0.26, 0.66},  {-1.09, 0.0}};
}
BallDistribution BallDistribution::tiny() {
    return {{-0.05, 0.05}, {-6.90, -6.80}, {0.41, 0.42}, {0.30, 0.31}, {1.78, 1.79},
            {0.57, 0.58},  {0.18, 0.42},   {-0.73, -0.37}};
}
BallDistribution BallDistribution::thrower2() {
    return {{-0.9, 0.9}, {-9.4, -5.0}, {-1.2, 1.5}, {0.15, 0.55}, {1.01, 1.57},
            {0.25, 0.64}, {0.18, 0.62}, {-1.26, -0.33}};
}
BallDistribution BallDistribution::velocity_offset() {
    BallDistribution d = thrower();
    d.vel_y = {-8.05, -7.45};
    d.land_y = {-1.10, -0.50};
    return d;
}

std::vector<std::string> BallDistribution::preset_names() {
    return {"thrower", "medium", "wide", "tiny", "thrower2", "velocity_offset"};
}

BallDistribution BallDistribution::preset(const std::string& name) {
    if (name == "thrower" || name == "baseline") return thrower();
    if (name == "medium") return medium();
    if (name == "wide") return wide();
    if (name == "tiny") return tiny();
    if (name == "thrower2") return thrower2();
    if (name == "velocity_offset") return velocity_offset();
    throw ConfigError("unknown ball distribution preset '" + name + "'");
}

Landing simulate_landing(const dynamics::BallState& launch, const dynamics::BallPhysicalParams& ball,
                         const dynamics::SurfaceParams& surfaces) {
    const double contact_z = surfaces.table_height + ball.radius;
    dynamics::BallState s = launch;
    constexpr double kStep = 1e-3;
    for (int i = 0; i < 3000; ++i) {
        const dynamics::BallState next = dynamics::integrate_flight(s, ball, kStep);
        if (next.position.z() <= contact_z && s.position.z() > contact_z) {
            const double w = (s.position.z() - contact_z) / (s.position.z() - next.position.z());
            const Vec3 p = s.position + w * (next.position - s.position);
            return {true, p.x(), p.y()};
        }
        s = next;
    }
    return {};
}

dynamics::BallState sample_launch(const BallDistribution& dist, const dynamics::BallPhysicalParams& ball,
                                  const dynamics::SurfaceParams& surfaces, Rng& rng) {
    for (int attempt = 0; attempt < kMaxLaunchAttempts; ++attempt) {
        dynamics::BallState s;
        s.position = {draw(dist.pos_x, rng), draw(dist.pos_y, rng), draw(dist.pos_z, rng)};
        s.velocity = {draw(dist.vel_x, rng), draw(dist.vel_y, rng), draw(dist.vel_z, rng)};
        const Landing land = simulate_landing(s, ball, surfaces);
        if (land.reached && land.x >= dist.land_x.min && land.x <= dist.land_x.max && land.y >= dist.land_y.min &&
            land.y <= dist.land_y.max) {
            return s;
        }
    }
    throw InfeasibleDistribution();
}

}  // namespace ttlab::env
