// Acceptance suite: one PASS/FAIL line per criterion.
//
//   ttlab_acceptance            run everything
//   ttlab_acceptance 1 2 7      run a subset
//   ttlab_acceptance --out DIR  also keep study artifacts under DIR

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ttlab/cli/commands.hpp"
#include "ttlab/cli/config_binding.hpp"
#include "ttlab/cli/config_format.hpp"
#include "ttlab/cli/study.hpp"
#include "ttlab/core/rng.hpp"
#include "ttlab/dynamics/ball.hpp"
#include "ttlab/dynamics/kinematics.hpp"
#include "ttlab/env/rewards.hpp"
#include "ttlab/env/state_machine.hpp"
#include "ttlab/env/table_tennis_env.hpp"
#include "ttlab/fidelity/timed_buffer.hpp"
#include "ttlab/realbridge/fusion.hpp"
#include "ttlab/realbridge/safety.hpp"
#include "ttlab/realbridge/savitzky_golay.hpp"
#include "ttlab/realbridge/throttle.hpp"
#include "ttlab/tracking/bias_study.hpp"
#include "ttlab/tracking/kalman.hpp"
#include "ttlab/trainer/es.hpp"
#include "ttlab/trainer/objective.hpp"
#include "ttlab/trainer/perturbations.hpp"
#include "ttlab/trainer/train.hpp"

#ifndef TTLAB_SOURCE_DIR
#define TTLAB_SOURCE_DIR "."
#endif

using namespace ttlab;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::optional<fs::path> g_out;

std::string num(double x, int digits = 4) {
    std::ostringstream os;
    os << std::setprecision(digits) << x;
    return os.str();
}

double cpu_seconds() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

// ---------------------------------------------------------------- 1

std::vector<int> brute_force_elites(const std::vector<trainer::DirectionMeans>& r, int k, trainer::EliteMode mode) {
    // Selection by repeated scan for the maximum; ties go to the lower index.
    std::vector<bool> taken(r.size(), false);
    std::vector<int> out;
    for (int pick = 0; pick < k; ++pick) {
        int best = -1;
        double best_key = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (taken[i]) continue;
            const double key =
                mode == trainer::EliteMode::ars ? (r[i].plus > r[i].minus ? r[i].plus : r[i].minus)
                                                : (r[i].plus > r[i].minus ? r[i].plus - r[i].minus : r[i].minus - r[i].plus);
            if (best < 0 || key > best_key) {
                best = static_cast<int>(i);
                best_key = key;
            }
        }
        taken[best] = true;
        out.push_back(best);
    }
    return out;
}

// Objective that remembers every parameter vector it was asked about.
class SpyObjective : public trainer::Objective {
public:
    explicit SpyObjective(VecX optimum) : optimum_(std::move(optimum)) {}
    int parameter_count() const override { return static_cast<int>(optimum_.size()); }
    double max_return() const override { return 0.0; }
    double rollout(const VecX& theta, const trainer::RunningNorm&, std::uint64_t seed,
                   trainer::RunningNorm*) const override {
        {
            std::lock_guard lock(mutex_);
            calls_[seed].push_back(theta);
        }
        return value(theta, seed);
    }
    // Seed-dependent so that repeats and directions see different returns.
    double value(const VecX& theta, std::uint64_t seed) const {
        const double jitter = static_cast<double>(seed % 1000) / 1000.0 - 0.5;
        return -(theta - optimum_).squaredNorm() + 0.1 * jitter * theta.sum();
    }
    const std::vector<VecX>& calls(std::uint64_t seed) const { return calls_.at(seed); }

private:
    VecX optimum_;
    mutable std::mutex mutex_;
    mutable std::map<std::uint64_t, std::vector<VecX>> calls_;
};

Verdict criterion_1() {
    Rng rng(101);
    int mismatches = 0;
    for (int table = 0; table < 1000; ++table) {
        const int n = 1 + static_cast<int>(rng() % 60);
        const int k = 1 + static_cast<int>(rng() % n);
        std::vector<trainer::DirectionMeans> r(n);
        const bool coarse = table % 3 == 0;  // many ties
        for (auto& d : r) {
            d.plus = uniform(rng, -5.0, 5.0);
            d.minus = uniform(rng, -5.0, 5.0);
            if (coarse) {
                d.plus = std::round(d.plus);
                d.minus = std::round(d.minus);
            }
        }
        for (auto mode : {trainer::EliteMode::ars, trainer::EliteMode::bgs})
            if (trainer::rank_elites(r, k, mode) != brute_force_elites(r, k, mode)) ++mismatches;
    }

    // Vanilla ARS over all N directions, recomputed from the perturbed
    // parameters the trainer queried.
    const int d = 6, n = 7, iterations = 5;
    VecX optimum(d);
    for (int i = 0; i < d; ++i) optimum[i] = 0.3 * (i + 1) - 1.0;
    SpyObjective spy(optimum);
    trainer::TrainerConfig tc;
    tc.directions = n;
    tc.elites = n;
    tc.repeats = 1;
    tc.mode = trainer::EliteMode::ars;
    tc.orthogonal = false;
    tc.sigma = 0.05;
    tc.step_size = 0.02;
    tc.iterations = iterations;
    tc.seed = 7;
    tc.eval_every = 0;
    tc.checkpoint_every = 1;
    std::vector<VecX> trainer_thetas;
    trainer::TrainCallbacks cb;
    cb.on_checkpoint = [&](const trainer::Checkpoint& c) { trainer_thetas.push_back(c.theta); };
    trainer::train(tc, spy, nullptr, cb);

    VecX theta = VecX::Zero(d);
    double worst = 0.0;
    for (int it = 0; it < iterations; ++it) {
        std::vector<double> rp(n), rm(n);
        std::vector<VecX> delta(n);
        for (int i = 0; i < n; ++i) {
            const std::uint64_t seed =
                derive_seed(tc.seed, {static_cast<std::uint64_t>(it), static_cast<std::uint64_t>(i), 0});
            const auto& q = spy.calls(seed);
            delta[i] = (q.at(0) - q.at(1)) / (2.0 * tc.sigma);
            rp[i] = spy.value(theta + tc.sigma * delta[i], seed);
            rm[i] = spy.value(theta - tc.sigma * delta[i], seed);
        }
        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += rp[i] + rm[i];
        mean /= 2.0 * n;
        double var = 0.0;
        for (int i = 0; i < n; ++i) var += (rp[i] - mean) * (rp[i] - mean) + (rm[i] - mean) * (rm[i] - mean);
        const double sigma_r = std::sqrt(var / (2.0 * n));
        VecX step = VecX::Zero(d);
        for (int i = 0; i < n; ++i) step += (rp[i] - rm[i]) * delta[i];
        theta += tc.step_size / sigma_r * step;
        worst = std::max(worst, (theta - trainer_thetas.at(it)).cwiseAbs().maxCoeff());
    }
    const bool pass = mismatches == 0 && worst <= 1e-10;
    return {pass, "rank_elites mismatches " + std::to_string(mismatches) + "/2000, ARS k=N max |dtheta| " +
                      num(worst, 3) + " over 5 iterations"};
}

// ---------------------------------------------------------------- 2

Verdict criterion_2() {
    Rng rng(202);
    double worst_dot = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 40);
        const int n = 1 + static_cast<int>(rng() % 90);
        const MatX p = trainer::sample_perturbations(d, n, true, rng);
        const int block = std::min(n, d);
        for (int b0 = 0; b0 < n; b0 += block)
            for (int i = b0; i < std::min(n, b0 + block); ++i)
                for (int j = b0; j < i; ++j) worst_dot = std::max(worst_dot, std::abs(p.row(i).dot(p.row(j))));
    }

    const int d = 10, per_call = 20, draws = 100000;
    VecX sum = VecX::Zero(d), sum2 = VecX::Zero(d);
    for (int c = 0; c < draws / per_call; ++c) {
        const MatX p = trainer::sample_perturbations(d, per_call, true, rng);
        for (int i = 0; i < per_call; ++i) {
            sum += p.row(i).transpose();
            sum2 += p.row(i).transpose().cwiseProduct(p.row(i).transpose());
        }
    }
    const double se_mean = 1.0 / std::sqrt(static_cast<double>(draws));
    const double se_var = std::sqrt(2.0 / draws);
    double worst_mean = 0.0, worst_var = 0.0;
    for (int i = 0; i < d; ++i) {
        const double m = sum[i] / draws;
        const double v = sum2[i] / draws - m * m;
        worst_mean = std::max(worst_mean, std::abs(m) / se_mean);
        worst_var = std::max(worst_var, std::abs(v - 1.0) / se_var);
    }
    const bool pass = worst_dot <= 1e-9 && worst_mean <= 3.0 && worst_var <= 3.0;
    return {pass, "max within-block |dot| " + num(worst_dot, 3) + ", worst mean " + num(worst_mean, 3) +
                      " SE, worst variance " + num(worst_var, 3) + " SE"};
}

// ---------------------------------------------------------------- 3

struct BanditRun {
    std::optional<int> iterations_to_threshold;
    double final_distance = 0.0;
};

BanditRun run_bandit(trainer::EliteMode mode, bool orthogonal, std::uint64_t seed, int max_iterations) {
    const int d = 10;
    Rng rng(derive_seed(0xb4d17, {seed}));
    VecX optimum(d);
    for (int i = 0; i < d; ++i) optimum[i] = uniform(rng, -1.0, 1.0);
    const trainer::QuadraticBandit bandit(optimum);
    trainer::TrainerConfig tc;
    tc.directions = 8;
    tc.elites = 4;
    tc.repeats = 1;
    tc.mode = mode;
    tc.orthogonal = orthogonal;
    tc.sigma = 0.02;
    tc.step_size = 0.002;
    tc.iterations = max_iterations;
    tc.seed = seed;
    tc.eval_every = 0;
    tc.checkpoint_every = 1;
    BanditRun out;
    trainer::TrainCallbacks cb;
    cb.on_checkpoint = [&](const trainer::Checkpoint& c) {
        out.final_distance = (c.theta - optimum).norm();
        if (!out.iterations_to_threshold && out.final_distance < 1e-2) out.iterations_to_threshold = c.iteration;
    };
    trainer::train(tc, bandit, nullptr, cb);
    return out;
}

Verdict criterion_3() {
    const BanditRun fixed = run_bandit(trainer::EliteMode::bgs, true, 1, 200);
    int wins = 0;
    std::ostringstream per_seed;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const BanditRun bgs = run_bandit(trainer::EliteMode::bgs, true, 100 + s, 1000);
        const BanditRun ars = run_bandit(trainer::EliteMode::ars, false, 100 + s, 1000);
        const int b = bgs.iterations_to_threshold.value_or(1000000);
        const int a = ars.iterations_to_threshold.value_or(1000000);
        if (b <= a) ++wins;
        per_seed << (s ? " " : "") << b << "/" << a;
    }
    const bool pass = fixed.iterations_to_threshold.has_value() && wins >= 7;
    return {pass, "seed 1 reaches 1e-2 at iteration " +
                      (fixed.iterations_to_threshold ? std::to_string(*fixed.iterations_to_threshold) : "never") +
                      " (|theta-theta*| " + num(fixed.final_distance, 3) + " at 200); BGS<=ARS in " +
                      std::to_string(wins) + "/10 seeds (bgs/ars: " + per_seed.str() + ")"};
}

// ---------------------------------------------------------------- 4, 5

cli::StudySpec load_study(const std::string& file) {
    cli::ParseOptions opts;
    opts.preset_dirs = {fs::path(TTLAB_SOURCE_DIR) / "configs" / "presets"};
    const cli::ConfigDoc doc = cli::load_config(fs::path(TTLAB_SOURCE_DIR) / "configs" / file, opts);
    return cli::bind_study(doc, cli::Profile::desk);
}

struct VariantScore {
    std::vector<double> solved_means;  ///< per solved seed, mean over repetitions
    int tried = 0;
    double mean() const {
        return solved_means.empty() ? 0.0
                                    : std::accumulate(solved_means.begin(), solved_means.end(), 0.0) /
                                          static_cast<double>(solved_means.size());
    }
    std::string describe() const {
        std::ostringstream os;
        os << num(mean(), 3) << " (" << solved_means.size() << "/" << tried << " seeds solved)";
        return os.str();
    }
};

// Trains seeds 0, 1, ... until `needed` of them solve (at most `max_seeds`).
VariantScore score_variant(const cli::StudySpec& base, const std::string& name, int needed, int max_seeds) {
    cli::StudySpec spec = base;
    const auto it = std::find_if(base.variants.begin(), base.variants.end(),
                                 [&](const cli::StudyVariant& v) { return v.name == name; });
    if (it == base.variants.end()) throw Error("study has no variant " + name);
    spec.variants = {*it};
    VariantScore score;
    for (int s = 0; s < max_seeds && static_cast<int>(score.solved_means.size()) < needed; ++s) {
        spec.seeds = {static_cast<std::uint64_t>(s)};
        std::optional<fs::path> out;
        if (g_out) out = *g_out / "studies" / cli::to_string(spec.kind);
        const cli::StudyResult r = cli::run_study(spec, 1, out);
        ++score.tried;
        for (const auto& o : r.outcomes) {
            std::cerr << "  " << name << " seed " << o.seed << ": "
                      << (o.solved ? "solved at " + std::to_string(*o.solve_iteration) : "not solved");
            if (o.solved) {
                const double m = std::accumulate(o.repetition_means.begin(), o.repetition_means.end(), 0.0) /
                                 static_cast<double>(o.repetition_means.size());
                score.solved_means.push_back(m);
                std::cerr << ", reference return " << num(m, 4);
            }
            std::cerr << "\n";
        }
    }
    return score;
}

Verdict criterion_4() {
    const double t0 = cpu_seconds();
    const cli::StudySpec spec = load_study("study_latency.cfg");
    const VariantScore zero = score_variant(spec, "latency_0", 3, 6);
    const VariantScore matched = score_variant(spec, "latency_100", 3, 6);
    const double cpu = cpu_seconds() - t0;
    const double gap = matched.mean() - zero.mean();
    const bool pass = zero.solved_means.size() >= 3 && matched.solved_means.size() >= 3 && gap >= 0.3 && cpu <= 7200;
    return {pass, "reference return: trained at 100% latency " + matched.describe() + ", at 0% " + zero.describe() +
                      ", gap " + num(gap, 3) + " (need >= 0.3); " + num(cpu / 60.0, 3) + " CPU min"};
}

Verdict criterion_5() {
    const double t0 = cpu_seconds();
    const cli::StudySpec spec = load_study("study_noise.cfg");
    const VariantScore base = score_variant(spec, "noise_4cm", 3, 6);
    const VariantScore wide = score_variant(spec, "noise_8cm", 3, 6);
    const VariantScore biased = score_variant(spec, "noise_4cm_bias", 3, 6);
    const double cpu = cpu_seconds() - t0;
    const bool enough = base.solved_means.size() >= 3 && wide.solved_means.size() >= 3 && biased.solved_means.size() >= 3;
    const double drop = base.mean() > 0.0 ? 1.0 - biased.mean() / base.mean() : 0.0;
    const double wide_gap = std::abs(wide.mean() - base.mean());
    const bool pass = enough && drop >= 0.15 && wide_gap <= 0.2 && cpu <= 7200;
    return {pass, "reference return: +/-4cm " + base.describe() + ", +/-8cm " + wide.describe() + ", 4cm bias " +
                      biased.describe() + "; bias drop " + num(100.0 * drop, 3) + "% (need >= 15%), |8cm-4cm| " +
                      num(wide_gap, 3) + " (need <= 0.2); " + num(cpu / 60.0, 3) + " CPU min"};
}

// ---------------------------------------------------------------- 6

Verdict criterion_6() {
    const std::vector<tracking::StereoPair> pairs{tracking::same_side_pair(), tracking::opposite_side_pair()};
    tracking::BiasStudyConfig cfg;
    cfg.heights = {0.25};
    cfg.quantize = true;
    cfg.noise_px = 0.5;
    const auto noisy = tracking::bias_study(pairs, cfg);
    std::map<double, double> same, opposite;
    for (const auto& p : noisy) (p.config == pairs[0].name ? same : opposite)[p.y] = p.mean_bias;
    double worst_ratio = 0.0;
    for (const auto& [y, b] : same) worst_ratio = std::max(worst_ratio, opposite.at(y) / b);

    cfg.quantize = false;
    cfg.noise_px = 0.0;
    cfg.positions = 20;
    cfg.samples = 2;
    double worst_exact = 0.0;
    for (const auto& p : tracking::bias_study(pairs, cfg)) worst_exact = std::max(worst_exact, p.mean_bias);
    const bool pass = !same.empty() && worst_ratio <= 0.2 && worst_exact <= 1e-9;
    return {pass, std::to_string(same.size()) + " y positions, worst opposite/same bias ratio " + num(worst_ratio, 3) +
                      " (need <= 0.2); ideal detections max bias " + num(worst_exact, 3) + " m"};
}

// ---------------------------------------------------------------- 7

struct FlightOracle {
    Vec3 p, v;
};

FlightOracle rk4_drag(FlightOracle s, double k, double h, int steps) {
    const auto acc = [&](const Vec3& v) -> Vec3 { return Vec3(0.0, 0.0, -9.81) - k * v.norm() * v; };
    for (int i = 0; i < steps; ++i) {
        const Vec3 k1v = acc(s.v), k1p = s.v;
        const Vec3 k2v = acc(s.v + 0.5 * h * k1v), k2p = s.v + 0.5 * h * k1v;
        const Vec3 k3v = acc(s.v + 0.5 * h * k2v), k3p = s.v + 0.5 * h * k2v;
        const Vec3 k4v = acc(s.v + h * k3v), k4p = s.v + h * k3v;
        s.p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        s.v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    return s;
}

Verdict criterion_7() {
    const dynamics::BallPhysicalParams params;
    const double area = 3.14159265358979323846 * 0.02 * 0.02;
    const double k = 1.2 * 0.47 * area / (2.0 * 0.0027);

    dynamics::BallState s;
    s.position = {0.1, -1.2, 0.3};
    s.velocity = {0.8, 7.5, 2.5};
    const FlightOracle ref = rk4_drag({s.position, s.velocity}, k, 1e-5, 50000);
    dynamics::BallState stepped = s;
    double energy = dynamics::mechanical_energy(s, params);
    double energy_rise = 0.0;
    for (int i = 0; i < 50; ++i) {
        for (int j = 0; j < 10; ++j) {
            stepped = dynamics::step_ball_flight(stepped, params, 0.001);
            const double e = dynamics::mechanical_energy(stepped, params);
            energy_rise = std::max(energy_rise, e - energy);
            energy = e;
        }
    }
    const double vel_err = (stepped.velocity - ref.v).norm();

    const double v_term = std::sqrt(2.0 * 0.0027 * 9.81 / (1.2 * 0.47 * area));
    dynamics::BallState fall;
    fall.position = {0.0, 0.0, 100.0};
    fall = dynamics::integrate_flight(fall, params, 10.0);
    const double sim_term = fall.velocity.norm();
    const double rel = std::abs(sim_term - v_term) / v_term;
    const double rel_fn = std::abs(dynamics::terminal_speed(params) - v_term) / v_term;
    const bool pass = vel_err <= 1e-4 && rel <= 0.01 && rel_fn <= 0.01 && std::abs(v_term - 8.65) < 0.01 &&
                      energy_rise <= 1e-12;
    return {pass, "velocity error vs 10us RK4 after 0.5 s " + num(vel_err, 3) + " m/s; terminal " +
                      num(sim_term, 5) + " m/s vs " + num(v_term, 5) + " m/s (" + num(100 * rel, 3) +
                      "%); max energy rise " + num(energy_rise, 3) + " J"};
}

// ---------------------------------------------------------------- 8

bool spd_oracle(const tracking::Mat6& m) {
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff())) return false;
    const Eigen::SelfAdjointEigenSolver<tracking::Mat6> es(0.5 * (m + m.transpose()));
    return es.info() == Eigen::Success && es.eigenvalues().minCoeff() > 0.0;
}

Verdict criterion_8() {
    const Vec3 p0(0.2, -1.4, 0.4), v0(0.3, 5.0, 2.0);
    tracking::KalmanParams kp;
    tracking::TrackState track = tracking::init_track(p0, 0.0, kp);
    double err = 0.0;
    for (int i = 1; i <= 125; ++i) {
        const double t = i / 125.0;
        const Vec3 truth = p0 + v0 * t + 0.5 * t * t * Vec3(0.0, 0.0, -9.81);
        track = tracking::kalman_step(track, truth, t, kp);
        err = (track.mean.head<3>() - truth).norm();
    }

    Rng rng(808);
    int failures = 0;
    long checks = 0;
    for (int seq = 0; seq < 10000; ++seq) {
        tracking::KalmanParams p;
        p.process_noise = std::exp(uniform(rng, std::log(1e-3), std::log(10.0)));
        p.measurement_noise = std::exp(uniform(rng, std::log(1e-4), std::log(0.1)));
        p.gate = uniform(rng, 1.0, 30.0);
        double t = uniform(rng, 0.0, 5.0);
        tracking::TrackState tr =
            tracking::init_track(Vec3(uniform(rng, -1, 1), uniform(rng, -2, 2), uniform(rng, 0, 1)), t, p);
        for (int step = 0; step < 30; ++step) {
            t += std::exp(uniform(rng, std::log(1e-4), std::log(0.2)));
            std::optional<Vec3> z;
            if (uniform(rng, 0.0, 1.0) < 0.7) {
                const double spread = uniform(rng, 0.0, 1.0) < 0.1 ? 2.0 : 0.05;
                z = tr.mean.head<3>() + Vec3(uniform(rng, -spread, spread), uniform(rng, -spread, spread),
                                             uniform(rng, -spread, spread));
            }
            tr = tracking::kalman_step(tr, z, t, p);
            ++checks;
            if (!spd_oracle(tr.covariance)) ++failures;
        }
    }
    const bool pass = err < 1e-3 && failures == 0;
    return {pass, "noiseless ballistic track error after 1 s " + num(1e3 * err, 3) + " mm; covariance not SPD in " +
                      std::to_string(failures) + " of " + std::to_string(checks) + " steps"};
}

// ---------------------------------------------------------------- 9

Verdict criterion_9() {
    Rng rng(909);
    double sg_err = 0.0;
    for (int deg = 0; deg <= 2; ++deg) {
        for (int trial = 0; trial < 20; ++trial) {
            const double c0 = uniform(rng, -2, 2), c1 = deg >= 1 ? uniform(rng, -2, 2) : 0.0,
                         c2 = deg >= 2 ? uniform(rng, -2, 2) : 0.0;
            std::vector<double> x(40);
            for (int i = 0; i < 40; ++i) {
                const double t = 0.1 * i;
                x[i] = c0 + c1 * t + c2 * t * t;
            }
            const auto y = realbridge::savgol_filter(x, realbridge::SavitzkyGolay{9, 2});
            for (int i = 4; i < 36; ++i) sg_err = std::max(sg_err, std::abs(y[i] - x[i]));
        }
    }

    double lin_err = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double a = uniform(rng, -3, 3), b = uniform(rng, -3, 3);
        const double rate = 125.0;
        fidelity::TimedBuffer buf(1, 64);
        const double t0 = uniform(rng, 0.0, 10.0);
        for (int i = 0; i < 40; ++i) {
            const double t = t0 + i / rate;
            const double v = a + b * t;
            buf.push(t, std::span<const double>(&v, 1));
        }
        realbridge::FusionParams fp;
        for (int q = 0; q < 40; ++q) {
            const double tq = t0 + uniform(rng, 0.0, 39.0 / rate + 0.9 * fp.max_extrapolation);
            double out = 0.0;
            realbridge::fuse_buffer(buf, tq, fp, std::span<double>(&out, 1));
            lin_err = std::max(lin_err, std::abs(out - (a + b * tq)));
        }
    }

    int throttle_bad = 0;
    for (double hz : {100.0, 125.0, 248.0, 60.0}) {
        realbridge::Throttler th(hz);
        const double start = 1.7;
        th.start(start);
        std::int64_t k = 0;
        for (int step = 0; step < 2000; ++step) {
            // Compute time in periods; include exact multiples.
            double periods = uniform(rng, 0.05, 3.5);
            if (step % 7 == 0) periods = static_cast<double>(1 + step % 3);
            const double now = start + static_cast<double>(k) / hz + periods / hz;
            const auto need = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(periods - 1e-9)));
            k += need;
            const double next = th.finish_step(now);
            if (next != start + static_cast<double>(k) / hz) ++throttle_bad;
            if (std::abs((next - start) * hz - static_cast<double>(k)) > 1e-9) ++throttle_bad;
        }
    }
    const bool pass = sg_err <= 1e-9 && lin_err <= 1e-9 && throttle_bad == 0;
    return {pass, "SG(9) max error on degree<=2 " + num(sg_err, 3) + "; linear interp/extrap error " +
                      num(lin_err, 3) + "; throttler boundary mismatches " + std::to_string(throttle_bad)};
}

// ---------------------------------------------------------------- 10

Verdict criterion_10() {
    const auto chain = dynamics::KinematicChain::default_robot();
    const realbridge::SafetyLimits limits;
    const dynamics::JointVector lo = chain.lower_limits(), hi = chain.upper_limits(), vmax = chain.velocity_limits();
    Rng rng(1010);
    const auto region_ok = [&](const Vec3& p) {
        return p.z() >= limits.min_paddle_height - 1e-9 && (p.array() >= limits.cube_min.array() - 1e-9).all() &&
               (p.array() <= limits.cube_max.array() + 1e-9).all();
    };
    int commands = 0, joint_bad = 0, paddle_bad = 0;
    while (commands < 100000) {
        dynamics::JointVector q;
        for (int i = 0; i < dynamics::kDof; ++i) q[i] = uniform(rng, lo[i], hi[i]);
        if (!region_ok(dynamics::paddle_pose(chain, q).position)) continue;
        dynamics::JointVector v;
        for (int i = 0; i < dynamics::kDof; ++i) {
            const double r = uniform(rng, 0.0, 1.0);
            v[i] = r < 0.2 ? uniform(rng, -50.0, 50.0) : r < 0.3 ? 0.0 : uniform(rng, -3.0, 3.0) * vmax[i];
        }
        const auto safe = realbridge::filter_command_safety(chain, q, v, limits);
        ++commands;
        for (double h : {limits.step, limits.lookahead}) {
            const dynamics::JointVector qn = q + safe.velocity * h;
            if (((qn - hi).array() > 1e-12).any() || ((lo - qn).array() > 1e-12).any()) ++joint_bad;
            if (!region_ok(dynamics::paddle_pose(chain, qn).position)) ++paddle_bad;
        }
        if (((safe.position - hi).array() > 1e-12).any() || ((lo - safe.position).array() > 1e-12).any()) ++joint_bad;
    }

    // The 250 ms rule on a single joint, away from the paddle region faces.
    dynamics::JointVector q = 0.5 * (lo + hi);
    q[1] = -1.0;  // gantry y
    const int j = 0;
    const double room = 0.2;
    q[j] = hi[j] - room;
    int cap_bad = 0;
    const auto speed_for = [&](double v) {
        dynamics::JointVector cmd = dynamics::JointVector::Zero();
        cmd[j] = v;
        return realbridge::filter_command_safety(chain, q, cmd, limits).velocity[j];
    };
    const double exact = room / 0.25;  // reaches the limit exactly at 250 ms
    if (std::abs(speed_for(exact) - exact) > 1e-12) ++cap_bad;
    if (std::abs(speed_for(0.5 * exact) - 0.5 * exact) > 1e-12) ++cap_bad;
    if (std::abs(speed_for(std::min(vmax[j], 1.5 * exact)) - exact) > 1e-12) ++cap_bad;
    if (std::abs(speed_for(-exact) + exact) > 1e-12) ++cap_bad;  // moving away is untouched
    q[j] = hi[j];
    if (speed_for(0.3) > 0.0) ++cap_bad;  // at the limit only retreat is allowed
    const bool pass = joint_bad == 0 && paddle_bad == 0 && cap_bad == 0;
    return {pass, std::to_string(commands) + " commands: " + std::to_string(joint_bad) + " joint-limit and " +
                      std::to_string(paddle_bad) + " paddle-region violations; 250 ms boundary cases failed " +
                      std::to_string(cap_bad)};
}

// ---------------------------------------------------------------- 11

Verdict criterion_11() {
    cli::ParseOptions opts;
    opts.preset_dirs = {fs::path(TTLAB_SOURCE_DIR) / "configs" / "presets"};
    const cli::ConfigDoc doc = cli::load_config(fs::path(TTLAB_SOURCE_DIR) / "configs" / "baseline.cfg", opts);
    cli::RunConfig run = cli::bind_run(doc, cli::Profile::desk);
    run.trainer.stop_when_solved = true;
    const trainer::EnvObjective objective(run.env, run.policy_spec());
    std::string curves[2];
    VecX thetas[2];
    int iterations = 0;
    const int workers[2] = {1, 8};
    for (int i = 0; i < 2; ++i) {
        trainer::TrainerConfig tc = run.trainer;
        tc.workers = workers[i];
        const auto r = trainer::train(tc, objective);
        curves[i] = cli::curve_csv(r.curve);
        thetas[i] = r.final.theta;
        iterations = r.final.iteration;
    }
    const bool same_theta = thetas[0].size() == thetas[1].size() &&
                            std::memcmp(thetas[0].data(), thetas[1].data(), sizeof(double) * thetas[0].size()) == 0;
    const bool pass = curves[0] == curves[1] && same_theta;
    return {pass, std::to_string(iterations) + " iterations, curve " + std::to_string(curves[0].size()) +
                      " bytes, 1 vs 8 workers: curves " + (curves[0] == curves[1] ? "identical" : "DIFFER") +
                      ", parameters " + (same_theta ? "identical" : "DIFFER")};
}

// ---------------------------------------------------------------- 12

struct ScriptedEpisode {
    std::string events;
    std::string final_state;
    double shaped = 0.0;
    double eval = 0.0;
};

// Scripted task-space policy: follow the ball laterally and in height, move
// forward as it approaches, hold a fixed paddle roll.
ScriptedEpisode scripted_episode(double forward, double roll, double dz, std::uint64_t seed) {
    env::EnvConfig c;
    c.action_mode = env::ActionMode::task_position;
    c.observation_mode = env::ObservationMode::task;
    c.fidelity.latency.scale = 0.0;
    c.fidelity.noise.half_width.setZero();
    c.ball_distribution = env::BallDistribution::tiny();
    c.fidelity.randomization.table_restitution.half_range = 0.0;
    c.fidelity.randomization.paddle_restitution.half_range = 0.0;
    ScriptedEpisode ep;
    for (int pass = 0; pass < 2; ++pass) {
        c.rewards = pass == 0 ? env::RewardSpec::shaped_default() : env::RewardSpec::evaluation();
        env::TableTennisEnv e(c);
        VecX obs = e.reset(seed);
        const auto home = e.home_task();
        std::string events;
        double total = 0.0;
        for (;;) {
            const Vec3 b = obs.tail(3);
            VecX a(5);
            a << b.x() - home[0], forward - 0.4 * b.y(), b.z() - home[2] + dz, roll, 0.0;
            const auto r = e.step(a);
            total += r.reward;
            for (const auto& ev : r.info.events) events += std::string(env::to_string(ev.kind)) + " ";
            obs = r.observation;
            if (r.done) {
                ep.final_state = r.info.state;
                break;
            }
        }
        ep.events = events;
        (pass == 0 ? ep.shaped : ep.eval) = total;
    }
    return ep;
}

Verdict criterion_12() {
    using env::EventKind;
    const auto spec = env::StateMachineSpec::ball_return();
    const auto run = [&](std::initializer_list<EventKind> kinds) {
        std::string s = spec.initial;
        for (EventKind k : kinds) {
            if (spec.is_terminal(s)) return std::string("early:") + s;
            s = env::settle(spec, env::transition(spec, s, env::GameEvent{k, 0.0, Vec3::Zero()}));
        }
        return s;
    };
    int table_bad = 0;
    const std::string win = "DONE_P1_WINPOINT", lose = "DONE_P1_LOSEPOINT";
    if (run({EventKind::TABLE_ARM, EventKind::PADDLE_ARM, EventKind::TABLE_OPP}) != win) ++table_bad;
    if (run({EventKind::TABLE_ARM, EventKind::PADDLE_ARM, EventKind::NET, EventKind::TABLE_OPP}) != win) ++table_bad;
    // Every other event from every live state loses.
    const std::map<std::string, std::set<EventKind>> allowed{
        {"P1_LAUNCH", {EventKind::TABLE_ARM}},
        {"P1_TABLE", {EventKind::PADDLE_ARM}},
        {"P1_PADDLE", {EventKind::TABLE_OPP, EventKind::NET}},
        {"P1_NET", {EventKind::TABLE_OPP}}};
    int lose_checked = 0;
    for (const auto& [state, ok] : allowed) {
        for (int k = 0; k < env::kEventKinds; ++k) {
            const auto kind = static_cast<EventKind>(k);
            if (ok.count(kind)) continue;
            ++lose_checked;
            if (env::settle(spec, env::transition(spec, state, env::GameEvent{kind, 0.0, Vec3::Zero()})) != lose)
                ++table_bad;
        }
    }

    // The same sequences from simulated trajectories.
    int sim_bad = 0;
    std::ostringstream found;
    const ScriptedEpisode direct = scripted_episode(-0.75, 0.25, 0.0, 1000);
    if (direct.events != "TABLE_ARM PADDLE_ARM TABLE_OPP " || direct.final_state != win || direct.eval != 2.0) {
        ++sim_bad;
        found << "[direct: " << direct.events << direct.final_state << "] ";
    }
    found << "direct return eval " << num(direct.eval) << " shaped " << num(direct.shaped);
    std::optional<ScriptedEpisode> clip;
    for (double roll = 0.30; roll <= 0.50 && !clip; roll += 0.01) {
        const ScriptedEpisode e = scripted_episode(-0.95, roll, 0.0, 1000);
        if (e.events.find("PADDLE_ARM NET TABLE_OPP") != std::string::npos) clip = e;
    }
    if (!clip || clip->final_state != win || clip->eval != 2.0) ++sim_bad;
    found << "; net-clip return " << (clip ? "eval " + num(clip->eval) + " shaped " + num(clip->shaped) : "not produced");
    const ScriptedEpisode short_hit = scripted_episode(-1.0, 0.0, 0.0, 1000);
    if (short_hit.final_state != lose || short_hit.eval != 1.0) ++sim_bad;
    const ScriptedEpisode idle = scripted_episode(-0.75, 0.2, -0.3, 1000);
    if (idle.final_state != lose || idle.events.find("PADDLE_ARM") != std::string::npos || idle.eval != 0.0) ++sim_bad;
    found << "; own-side return [" << short_hit.events << short_hit.final_state << "] eval " << num(short_hit.eval) << ", miss ["
          << idle.events << idle.final_state << "] eval " << num(idle.eval);

    const double shaped_max = env::RewardManager(env::RewardSpec::shaped_default()).max_return();
    const double eval_max = env::RewardManager(env::RewardSpec::evaluation()).max_return();
    const bool bounded = direct.shaped <= shaped_max && (!clip || clip->shaped <= shaped_max) &&
                         short_hit.shaped <= shaped_max && idle.shaped <= shaped_max;
    const bool pass = table_bad == 0 && sim_bad == 0 && shaped_max == 4.0 && eval_max == 2.0 && bounded;
    return {pass, "transition table: 2 win paths + " + std::to_string(lose_checked) + " losing events, " +
                      std::to_string(table_bad) + " wrong; simulated: " + found.str() + " (" +
                      std::to_string(sim_bad) + " wrong); max returns shaped " + num(shaped_max) + ", eval " +
                      num(eval_max)};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--out" && i + 1 < argc) {
            g_out = argv[++i];
        } else {
            only.insert(std::stoi(a));
        }
    }
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"ES correctness", criterion_1},
        {"orthogonal sampling", criterion_2},
        {"ES convergence", criterion_3},
        {"latency study", criterion_4},
        {"noise study", criterion_5},
        {"triangulation bias", criterion_6},
        {"ball physics", criterion_7},
        {"Kalman tracking", criterion_8},
        {"sensor fusion", criterion_9},
        {"safety filter", criterion_10},
        {"determinism", criterion_11},
        {"environment semantics", criterion_12},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!v.pass) ++failed;
        std::cout << "criterion " << std::setw(2) << id << " " << (v.pass ? "PASS" : "FAIL") << "  "
                  << criteria[i].first << ": " << v.detail << " [" << std::fixed << std::setprecision(1) << secs
                  << " s]" << std::defaultfloat << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
