#pragma once

#include <cstdint>
#include <memory>

#include "ttlab/env/config.hpp"
#include "ttlab/trainer/policy.hpp"
#include "ttlab/trainer/running_norm.hpp"

namespace ttlab::trainer {

/// Something a parameter vector can be scored on. Implementations must be
/// safe to call concurrently from several threads.
class Objective {
public:
    virtual ~Objective() = default;
    virtual int parameter_count() const = 0;
    /// Dimension of the observations fed through the running normalizer; 0 if none.
    virtual int observation_dim() const { return 0; }
    /// Largest achievable episode return.
    virtual double max_return() const = 0;
    /// Return of one episode. When `stats` is non-null every raw observation
    /// seen is pushed into it.
    virtual double rollout(const VecX& theta, const RunningNorm& norm, std::uint64_t seed,
                           RunningNorm* stats) const = 0;
};

/// f(theta) = -|theta - theta*|^2; deterministic, seed ignored.
class QuadraticBandit : public Objective {
public:
    explicit QuadraticBandit(VecX optimum) : optimum_(std::move(optimum)) {}
    int parameter_count() const override { return static_cast<int>(optimum_.size()); }
    double max_return() const override { return 0.0; }
    double rollout(const VecX& theta, const RunningNorm&, std::uint64_t, RunningNorm*) const override {
        return -(theta - optimum_).squaredNorm();
    }
    const VecX& optimum() const { return optimum_; }

private:
    VecX optimum_;
};

/// Episodes of the table tennis environment driven by a policy.
class EnvObjective : public Objective {
public:
    EnvObjective(env::EnvConfig config, PolicySpec policy);

    int parameter_count() const override { return policy_.parameter_count(); }
    int observation_dim() const override { return policy_.observation_dim(); }
    double max_return() const override { return max_return_; }
    double rollout(const VecX& theta, const RunningNorm& norm, std::uint64_t seed,
                   RunningNorm* stats) const override;

    const env::EnvConfig& config() const { return config_; }
    const PolicySpec& policy() const { return policy_; }

    /// Policy spec whose shape matches the environment's observation and action.
    static PolicySpec matching_policy(const env::EnvConfig& config, PolicyArch arch = PolicyArch::linear);

private:
    env::EnvConfig config_;
    PolicySpec policy_;
    double max_return_ = 0.0;
};

}  // namespace ttlab::trainer
