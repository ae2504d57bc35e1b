#include "ttlab/fidelity/randomization.hpp"

#include "ttlab/core/errors.hpp"

namespace ttlab::fidelity {
namespace {

void check_restitution(const UniformRange& r, const char* name) {
    if (!(r.half_range >= 0.0)) throw InvalidArgument(std::string(name) + ": half range must be non-negative");
    if (!(r.center - r.half_range >= 0.0 && r.center + r.half_range <= 1.2))
        throw InvalidArgument(std::string(name) + ": range must stay within [0, 1.2]");
}

double draw(const UniformRange& r, Rng& rng) {
    // Consume a draw even for fixed ranges so streams do not shift between presets.
    return uniform(rng, r.center - r.half_range, r.center + r.half_range);
}

}  // namespace

void RandomizationSpec::validate() const {
    check_restitution(table_restitution, "table restitution");
    check_restitution(paddle_restitution, "paddle restitution");
    check_restitution(ball_restitution, "ball restitution");
    if (!(paddle_mass.half_range >= 0.0 && paddle_mass.center - paddle_mass.half_range > 0.0))
        throw InvalidArgument("paddle mass range must stay positive");
}

RandomizedPhysics randomize_physics(const RandomizationSpec& spec, const dynamics::SurfaceParams& base_surfaces,
                                    const dynamics::BallPhysicalParams& base_ball, Rng& rng) {
    RandomizedPhysics out{base_surfaces, base_ball};
    out.surfaces.table_restitution = draw(spec.table_restitution, rng);
    out.surfaces.paddle_restitution = draw(spec.paddle_restitution, rng);
    out.ball.restitution = draw(spec.ball_restitution, rng);
    out.surfaces.paddle_mass = draw(spec.paddle_mass, rng);
    return out;
}

}  // namespace ttlab::fidelity
