#include "ttlab/trainer/objective.hpp"

#include "ttlab/core/errors.hpp"
#include "ttlab/env/table_tennis_env.hpp"

namespace ttlab::trainer {

EnvObjective::EnvObjective(env::EnvConfig config, PolicySpec policy)
    : config_(std::move(config)), policy_(std::move(policy)) {
    env::TableTennisEnv probe(config_);
    policy_.validate();
    if (policy_.observation_dim() != probe.observation_dim() || policy_.action_dim != probe.action_dim())
        throw InvalidArgument("policy expects observation " + std::to_string(policy_.observation_dim()) +
                              " / action " + std::to_string(policy_.action_dim) + " but environment provides " +
                              std::to_string(probe.observation_dim()) + " / " +
                              std::to_string(probe.action_dim()));
    max_return_ = probe.max_return();
}

PolicySpec EnvObjective::matching_policy(const env::EnvConfig& config, PolicyArch arch) {
    env::TableTennisEnv probe(config);
    PolicySpec p;
    p.arch = arch;
    p.feature_dim = probe.feature_dim();
    p.history = env::kHistoryLength;
    p.action_dim = probe.action_dim();
    p.observation_mode = config.observation_mode == env::ObservationMode::joint ? "joint" : "task";
    return p;
}

double EnvObjective::rollout(const VecX& theta, const RunningNorm& norm, std::uint64_t seed,
                             RunningNorm* stats) const {
    env::TableTennisEnv env(config_);
    VecX obs = env.reset(seed);
    const VecX scale = norm.count > 0.0 ? norm.scale() : VecX::Ones(obs.size());
    const VecX mean = norm.count > 0.0 ? norm.mean : VecX::Zero(obs.size());
    VecX z(obs.size()), action;
    double total = 0.0;
    while (true) {
        if (stats) stats->push(obs);
        z = (obs - mean).cwiseQuotient(scale);
        policy_forward(policy_, theta, z, action);
        env::StepResult r = env.step(action);
        total += r.reward;
        if (r.done) break;
        obs = std::move(r.observation);
    }
    return total;
}

}  // namespace ttlab::trainer
