#include "ttlab/trainer/train.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "ttlab/core/errors.hpp"
#include "ttlab/core/rng.hpp"
#include "ttlab/trainer/perturbations.hpp"

namespace ttlab::trainer {
namespace {

constexpr std::uint64_t kSamplerStream = 0x5a3e;
constexpr std::uint64_t kEvalStream = 0xe7a1;

std::string rng_to_string(const Rng& rng) {
    std::ostringstream os;
    os << rng;
    return os.str();
}

Rng rng_from_string(const std::string& s) {
    Rng rng;
    std::istringstream is(s);
    is >> rng;
    if (!is) throw Error("checkpoint: corrupt sampler state");
    return rng;
}

}  // namespace

void TrainerConfig::validate() const {
    if (directions < 1) throw ConfigError("trainer: directions must be >= 1");
    if (elites < 1 || elites > directions) throw ConfigError("trainer: elites must lie in [1, directions]");
    if (repeats < 1) throw ConfigError("trainer: repeats must be >= 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("trainer: sigma must be positive");
    if (!(step_size > 0.0) || !std::isfinite(step_size)) throw ConfigError("trainer: step_size must be positive");
    if (iterations < 0) throw ConfigError("trainer: iterations must be non-negative");
    if (workers < 1) throw ConfigError("trainer: workers must be >= 1");
    if (eval_every < 0 || eval_episodes < 1) throw ConfigError("trainer: invalid evaluation schedule");
    if (checkpoint_every < 0) throw ConfigError("trainer: checkpoint_every must be non-negative");
    if (!(solve_fraction > 0.0 && solve_fraction <= 1.0)) throw ConfigError("trainer: solve_fraction must lie in (0, 1]");
}

TrainerConfig TrainerConfig::desk() {
    TrainerConfig c;
    c.directions = 16;
    c.repeats = 2;
    c.elites = 5;
    c.iterations = 2000;
    c.eval_every = 25;
    c.eval_episodes = 50;
    return c;
}

TrainerConfig TrainerConfig::paper() { return TrainerConfig{}; }

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    std::vector<std::exception_ptr> errors(n);
    if (workers <= 1 || n == 1) {
        for (int i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<int> next{0};
        const auto work = [&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::jthread> pool;
        const int t = std::min(workers, n);
        pool.reserve(t);
        for (int w = 0; w < t; ++w) pool.emplace_back(work);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

DirectionResult evaluate_direction(const Objective& objective, const VecX& theta, const VecX& delta, double sigma,
                                   const RunningNorm& norm, int repeats, std::uint64_t seed, int iteration,
                                   int direction, bool common_random_numbers, bool collect_stats) {
    DirectionResult r;
    r.plus.resize(repeats);
    r.minus.resize(repeats);
    const int obs_dim = objective.observation_dim();
    if (collect_stats) r.stats = RunningNorm(obs_dim);
    RunningNorm* stats = collect_stats && obs_dim > 0 ? &r.stats : nullptr;
    const VecX plus = theta + sigma * delta;
    const VecX minus = theta - sigma * delta;
    const auto it = static_cast<std::uint64_t>(iteration);
    const auto dir = static_cast<std::uint64_t>(direction);
    for (int j = 0; j < repeats; ++j) {
        const auto rep = static_cast<std::uint64_t>(j);
        const std::uint64_t sp = common_random_numbers ? derive_seed(seed, {it, dir, rep}) : derive_seed(seed, {it, dir, rep, 1});
        const std::uint64_t sm = common_random_numbers ? sp : derive_seed(seed, {it, dir, rep, 2});
        try {
            r.plus[j] = objective.rollout(plus, norm, sp, stats);
            r.minus[j] = objective.rollout(minus, norm, sm, stats);
        } catch (const std::exception& e) {
            throw Error("direction " + std::to_string(direction) + " (iteration " + std::to_string(iteration) +
                        ", repeat " + std::to_string(j) + "): " + e.what());
        }
    }
    return r;
}

EvalResult evaluate_objective(const Objective& objective, const VecX& theta, const RunningNorm& norm, int episodes,
                              std::uint64_t seed, int workers) {
    if (episodes < 1) throw InvalidArgument("evaluation needs at least one episode");
    EvalResult out;
    out.returns.resize(episodes);
    parallel_for(episodes, workers, [&](int i) {
        out.returns[i] = objective.rollout(theta, norm, derive_seed(seed, {static_cast<std::uint64_t>(i)}), nullptr);
    });
    double sum = 0.0;
    for (double r : out.returns) sum += r;
    out.mean = sum / episodes;
    if (episodes > 1) {
        double ss = 0.0;
        for (double r : out.returns) ss += (r - out.mean) * (r - out.mean);
        out.ci95 = 1.96 * std::sqrt(ss / (episodes - 1)) / std::sqrt(static_cast<double>(episodes));
    }
    return out;
}

EvalResult evaluate_policy(const PolicyParams& policy, const RunningNorm& norm, const env::EnvConfig& config,
                           int episodes, std::uint64_t seed, int workers) {
    policy.validate();
    env::EnvConfig eval = config;
    eval.rewards = env::RewardSpec::evaluation();
    const EnvObjective objective(eval, policy.spec);
    return evaluate_objective(objective, policy.theta, norm, episodes, seed, workers);
}

TrainResult train(const TrainerConfig& config, const Objective& objective, const Checkpoint* resume,
                  const TrainCallbacks& callbacks) {
    config.validate();
    const int d = objective.parameter_count();
    const int obs_dim = objective.observation_dim();
    const bool normalize = config.normalize_observations && obs_dim > 0;

    TrainResult result;
    Checkpoint& state = result.final;
    Rng sampler(derive_seed(config.seed, {kSamplerStream}));
    if (resume) {
        state = *resume;
        if (state.theta.size() != d)
            throw InvalidArgument("resume checkpoint has " + std::to_string(state.theta.size()) +
                                  " parameters, objective needs " + std::to_string(d));
        if (!state.rng_state.empty()) sampler = rng_from_string(state.rng_state);
    } else {
        state.theta = VecX::Zero(d);
        state.norm = RunningNorm(obs_dim);
    }
    if (state.norm.dim() != obs_dim) state.norm = RunningNorm(obs_dim);
    const double solve_at = config.solve_fraction * objective.max_return();

    const int n = config.directions;
    std::vector<DirectionResult> dirs(n);
    std::vector<DirectionMeans> means(n);
    while (state.iteration < config.iterations) {
        const auto t0 = std::chrono::steady_clock::now();
        const int iter = state.iteration;
        const MatX deltas = sample_perturbations(d, n, config.orthogonal, sampler);
        const VecX theta = state.theta;
        const RunningNorm norm = state.norm;
        parallel_for(n, config.workers, [&](int i) {
            dirs[i] = evaluate_direction(objective, theta, deltas.row(i).transpose(), config.sigma, norm,
                                         config.repeats, config.seed, iter, i, config.common_random_numbers,
                                         normalize);
        });

        CurveRow row;
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double p = 0.0, m = 0.0;
            for (double v : dirs[i].plus) p += v;
            for (double v : dirs[i].minus) m += v;
            total += p + m;
            means[i] = {p / config.repeats, m / config.repeats};
        }
        row.mean_return = total / (2.0 * n * config.repeats);
        const std::vector<int> elites = rank_elites(means, config.elites, config.mode);
        const double sigma_r = elite_return_std(means, elites);
        for (int i : elites) row.elite_diff_mean += std::abs(means[i].plus - means[i].minus);
        row.elite_diff_mean /= static_cast<double>(elites.size());
        state.theta = update_policy(state.theta, deltas, means, elites, config.step_size, sigma_r);
        if (normalize)
            for (int i = 0; i < n; ++i) state.norm.merge(dirs[i].stats);
        state.iteration = iter + 1;
        state.rng_state = rng_to_string(sampler);
        row.iteration = state.iteration;

        const bool last = state.iteration == config.iterations;
        if (config.eval_every > 0 && (state.iteration % config.eval_every == 0 || last)) {
            const EvalResult ev = evaluate_objective(objective, state.theta, state.norm, config.eval_episodes,
                                                     derive_seed(config.seed, {kEvalStream, static_cast<std::uint64_t>(iter)}),
                                                     config.workers);
            row.eval_return = ev.mean;
            if (!state.solved && objective.max_return() > 0.0 && ev.mean >= solve_at) {
                state.solved = true;
                state.solve_iteration = state.iteration;
                result.solve_checkpoint = state;
                if (callbacks.on_solved) callbacks.on_solved(state);
            }
        }
        result.curve.push_back(row);
        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        if (callbacks.on_iteration) callbacks.on_iteration(row, wall_ms);
        const bool stop = config.stop_when_solved && state.solved;
        if (callbacks.on_checkpoint &&
            ((config.checkpoint_every > 0 && state.iteration % config.checkpoint_every == 0) || last || stop))
            callbacks.on_checkpoint(state);
        if (stop) break;
    }
    return result;
}

}  // namespace ttlab::trainer
