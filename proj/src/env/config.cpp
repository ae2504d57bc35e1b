#include "ttlab/env/config.hpp"

namespace ttlab::env {

void EnvConfig::validate() const {
    if (control_hz < 20 || control_hz > 100) throw ConfigError("env: control_hz must lie in [20, 100]");
    if (1000 % control_hz != 0) throw ConfigError("env: control_hz must divide 1000 (1 ms physics substeps)");
    state_machine.validate();
    rewards.validate();
    done.validate();
    ball_distribution.validate();
    ball.validate();
    surfaces.validate();
    chain.validate();
    fidelity.latency.validate();
    fidelity.noise.validate();
    fidelity.randomization.validate();
    if (fidelity.buffer_capacity < 64) throw ConfigError("env: sensor buffer capacity must be >= 64");
    if (!(home_perturbation >= 0.0)) throw ConfigError("env: home_perturbation must be non-negative");
    const auto bad = dynamics::limit_violations(chain, home, -home_perturbation);
    if (!bad.empty()) throw ConfigError("env: home pose (plus perturbation) violates joint limits");
    if (!(task_space.cube_min.array() < task_space.cube_max.array()).all())
        throw ConfigError("env: task-space cube min must be below max");
}

}  // namespace ttlab::env
