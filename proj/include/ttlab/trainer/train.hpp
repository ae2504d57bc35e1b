#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ttlab/env/config.hpp"
#include "ttlab/trainer/checkpoint.hpp"
#include "ttlab/trainer/es.hpp"
#include "ttlab/trainer/objective.hpp"

namespace ttlab::trainer {

struct TrainerConfig {
    int directions = 200;        ///< N
    int repeats = 15;            ///< m
    int elites = 60;             ///< k
    double sigma = 0.025;
    double step_size = 0.00375;  ///< alpha
    EliteMode mode = EliteMode::bgs;
    bool orthogonal = true;
    bool normalize_observations = true;
    int iterations = 10000;
    std::uint64_t seed = 0;
    /// Use the same episode seed for the + and - rollouts of a direction.
    bool common_random_numbers = true;
    int workers = 1;
    int eval_every = 10;      ///< 0 disables periodic evaluation
    int eval_episodes = 20;
    int checkpoint_every = 100;
    double solve_fraction = 0.975;
    bool stop_when_solved = false;

    /// Throws ConfigError.
    void validate() const;
    /// N=16, m=2, k=5, 2000 iterations, evaluation every 25 over 50 episodes.
    static TrainerConfig desk();
    /// Full-scale hyper-parameters; N=200, m=15, k=60, 10000 iterations.
    static TrainerConfig paper();
};

/// One row of the training curve. Only deterministic quantities.
struct CurveRow {
    int iteration = 0;             ///< 1-based count of completed iterations
    double mean_return = 0.0;      ///< over all perturbed rollouts of the iteration
    double elite_diff_mean = 0.0;  ///< mean |R+ - R-| over the elites
    std::optional<double> eval_return;
};

struct DirectionResult {
    std::vector<double> plus;
    std::vector<double> minus;
    RunningNorm stats;
};

/// m rollouts at theta + sigma*delta and m at theta - sigma*delta. Episode
/// seeds come from (seed, iteration, direction, repeat[, sign]).
DirectionResult evaluate_direction(const Objective& objective, const VecX& theta, const VecX& delta, double sigma,
                                   const RunningNorm& norm, int repeats, std::uint64_t seed, int iteration,
                                   int direction, bool common_random_numbers, bool collect_stats);

struct TrainCallbacks {
    std::function<void(const CurveRow&, double wall_ms)> on_iteration;
    std::function<void(const Checkpoint&)> on_checkpoint;
    std::function<void(const Checkpoint&)> on_solved;
};

struct TrainResult {
    Checkpoint final;
    std::vector<CurveRow> curve;
    std::optional<Checkpoint> solve_checkpoint;
};

/// Runs ES. Results depend only on (config minus workers, objective, seed);
/// the worker count changes wall time only.
TrainResult train(const TrainerConfig& config, const Objective& objective, const Checkpoint* resume = nullptr,
                  const TrainCallbacks& callbacks = {});

struct EvalResult {
    std::vector<double> returns;
    double mean = 0.0;
    double ci95 = 0.0;  ///< half width, normal approximation
};

/// Mean return of `theta` with frozen normalization. Episode i uses seed
/// derive_seed(seed, {i}).
EvalResult evaluate_objective(const Objective& objective, const VecX& theta, const RunningNorm& norm, int episodes,
                              std::uint64_t seed, int workers = 1);

/// Evaluation protocol: hit + land reward only (max 2.0), shaping disabled.
EvalResult evaluate_policy(const PolicyParams& policy, const RunningNorm& norm, const env::EnvConfig& config,
                           int episodes = 50, std::uint64_t seed = 0, int workers = 1);

/// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
/// thrown (lowest index) is rethrown after all threads join.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace ttlab::trainer
