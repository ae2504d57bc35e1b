#include "ttlab/fidelity/noise.hpp"

#include "ttlab/core/errors.hpp"

namespace ttlab::fidelity {

void NoiseModel::validate() const {
    if (!(half_width.array() >= 0.0).all()) throw InvalidArgument("noise half-width must be non-negative");
    if (!bias.allFinite()) throw InvalidArgument("noise bias must be finite");
}

Vec3 apply_observation_noise(const Vec3& p, const NoiseModel& m, Rng& rng) {
    Vec3 out;
    for (int a = 0; a < 3; ++a) out[a] = p[a] + uniform(rng, -m.half_width[a], m.half_width[a]) + m.bias[a];
    return out;
}

}  // namespace ttlab::fidelity
