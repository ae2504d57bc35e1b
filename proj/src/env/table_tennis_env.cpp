#include "ttlab/env/table_tennis_env.hpp"

#include <algorithm>
#include <cmath>

#include "ttlab/core/errors.hpp"

namespace ttlab::env {
namespace {

using dynamics::BallState;
using dynamics::JointVector;
using dynamics::PaddlePose;
using dynamics::TaskVector;

constexpr double kSubstep = 1e-3;
constexpr int kGantryDof = 2;
constexpr int kArmDof = 6;
constexpr int kBisectIterations = 40;
constexpr int kMaxContactsPerSubstep = 8;
constexpr double kRobotClearance = 0.01;

enum class Contact { none, table, floor, net, net_cord, paddle };

bool finite(const BallState& b) {
    return b.position.allFinite() && b.velocity.allFinite();
}

// Paddle pose linearly blended between the substep endpoints.
PaddlePose blend(const PaddlePose& a, const PaddlePose& b, double u) {
    PaddlePose p = b;
    p.position = a.position + u * (b.position - a.position);
    p.normal = (a.normal + u * (b.normal - a.normal)).normalized();
    return p;
}

}  // namespace

TableTennisEnv::TableTennisEnv(EnvConfig config)
    : config_(std::move(config)),
      rewards_(config_.rewards),
      rng_(config_.seed),
      ball_buffer_(3, config_.fidelity.buffer_capacity),
      arm_buffer_(kArmDof, config_.fidelity.buffer_capacity),
      gantry_buffer_(kGantryDof, config_.fidelity.buffer_capacity),
      action_buffer_(1, 4) {
    config_.validate();
    action_buffer_ = fidelity::TimedBuffer(action_dim(), config_.fidelity.buffer_capacity);
    home_task_ = dynamics::paddle_pose(config_.chain, config_.home).task_vector();
    scratch_.resize(dynamics::kDof);
}

int TableTennisEnv::action_dim() const {
    return config_.action_mode == ActionMode::joint_velocity ? dynamics::kDof : 5;
}

int TableTennisEnv::feature_dim() const {
    return (config_.observation_mode == ObservationMode::joint ? dynamics::kDof : 5) + 3;
}

int TableTennisEnv::observation_dim() const { return feature_dim() * kHistoryLength; }

dynamics::PaddlePose TableTennisEnv::paddle() const { return dynamics::paddle_pose(config_.chain, q_, &qd_); }

VecX TableTennisEnv::reset(std::uint64_t seed) {
    rng_.seed(seed);
    return reset();
}

VecX TableTennisEnv::reset() {
    rewards_.reset();
    state_ = settle(config_.state_machine, config_.state_machine.initial);
    physics_ = fidelity::randomize_physics(config_.fidelity.randomization, config_.surfaces, config_.ball, rng_);
    latencies_ = fidelity::sample_episode_latencies(config_.fidelity.latency, rng_);
    const JointVector lo = config_.chain.lower_limits();
    const JointVector hi = config_.chain.upper_limits();
    for (int i = 0; i < dynamics::kDof; ++i) {
        const double p = config_.home_perturbation;
        q_[i] = std::clamp(config_.home[i] + uniform(rng_, -p, p), lo[i], hi[i]);
    }
    qd_.setZero();
    launch_ = sample_launch(config_.ball_distribution, physics_.ball, physics_.surfaces, rng_);
    launch_.time = 0.0;
    ball_ = launch_;
    time_ = 0.0;
    steps_ = 0;
    ball_frozen_ = false;
    active_ = true;

    ball_buffer_.clear();
    arm_buffer_.clear();
    gantry_buffer_.clear();
    action_buffer_.clear();
    push_sensors();
    action_buffer_.push(-control_dt(), VecX::Zero(action_dim()));

    history_.assign(kHistoryLength, VecX::Zero(feature_dim()));
    StageTimes stages;
    return observe(stages);
}

void TableTennisEnv::push_sensors() {
    ball_buffer_.push(time_, std::span<const double>(ball_.position.data(), 3));
    arm_buffer_.push(time_, std::span<const double>(q_.data() + kGantryDof, kArmDof));
    gantry_buffer_.push(time_, std::span<const double>(q_.data(), kGantryDof));
}

VecX TableTennisEnv::observe(StageTimes& stages) {
    using fidelity::LatencyComponent;
    const auto delayed_time = [&](const fidelity::TimedBuffer& buf, LatencyComponent c) {
        return std::max(time_ - latencies_[c], buf.oldest_time());
    };
    stages.ball_observed = delayed_time(ball_buffer_, LatencyComponent::ball_obs);
    stages.arm_observed = delayed_time(arm_buffer_, LatencyComponent::arm_obs);
    stages.gantry_observed = delayed_time(gantry_buffer_, LatencyComponent::gantry_obs);
    stages.policy = time_;

    Vec3 ball;
    JointVector q;
    fidelity::interpolate_into(ball_buffer_, stages.ball_observed, std::span<double>(ball.data(), 3));
    fidelity::interpolate_into(arm_buffer_, stages.arm_observed, std::span<double>(q.data() + kGantryDof, kArmDof));
    fidelity::interpolate_into(gantry_buffer_, stages.gantry_observed, std::span<double>(q.data(), kGantryDof));
    ball = fidelity::apply_observation_noise(ball, config_.fidelity.noise, rng_);

    VecX feat(feature_dim());
    if (config_.observation_mode == ObservationMode::joint) {
        feat.head<dynamics::kDof>() = q;
    } else {
        feat.head<5>() = dynamics::paddle_pose(config_.chain, q).task_vector();
    }
    feat.tail<3>() = ball;

    std::rotate(history_.begin(), history_.begin() + 1, history_.end());
    history_.back() = std::move(feat);
    VecX obs(observation_dim());
    for (int i = 0; i < kHistoryLength; ++i) obs.segment(i * feature_dim(), feature_dim()) = history_[i];
    return obs;
}

StepResult TableTennisEnv::step(const VecX& action) {
    if (!active_) throw Error("env: step() called without an active episode; call reset()");
    if (action.size() != action_dim())
        throw InvalidArgument("env: action has " + std::to_string(action.size()) + " entries, expected " +
                              std::to_string(action_dim()));
    if (!action.allFinite()) throw InvalidArgument("env: action contains non-finite values");

    StepResult out;
    StepInfo& info = out.info;
    info.stages.arm_action_applied = time_ + latencies_[fidelity::LatencyComponent::arm_action];
    info.stages.gantry_action_applied = time_ + latencies_[fidelity::LatencyComponent::gantry_action];
    action_buffer_.push(time_, action);

    const std::string state_before = state_;
    const int substeps = static_cast<int>(std::lround(control_dt() / kSubstep));
    bool collided = false;
    for (int s = 0; s < substeps; ++s) substep(kSubstep, info.events, collided);
    ++steps_;

    const DoneStatus status =
        check_done(config_.done, config_.state_machine, state_, ball_, collided, steps_);
    const PaddlePose pose = paddle();
    RewardContext ctx;
    ctx.step_index = steps_ - 1;
    ctx.events = info.events;
    ctx.state_before = state_before;
    ctx.state_after = state_;
    ctx.outcome = config_.state_machine.outcome(state_);
    ctx.episode_end = status.done;
    ctx.joint_positions = &q_;
    ctx.joint_velocities = &qd_;
    ctx.paddle = &pose;
    ctx.ball = &ball_;
    ctx.surfaces = &physics_.surfaces;
    ctx.chain = &config_.chain;
    info.reward = rewards_.step(ctx);

    info.step_index = steps_ - 1;
    info.time = time_;
    info.state = state_;
    info.done_reason = status.reason;
    out.reward = info.reward.total;
    out.done = status.done;
    out.observation = observe(info.stages);
    if (status.done) active_ = false;
    return out;
}

void TableTennisEnv::substep(double h, std::vector<GameEvent>& events, bool& collided) {
    using fidelity::LatencyComponent;
    const double t_arm = time_ - latencies_[LatencyComponent::arm_action];
    const double t_gantry = time_ - latencies_[LatencyComponent::gantry_action];
    const auto& chain = config_.chain;
    const int adim = action_dim();
    std::span<double> buf(scratch_.data(), adim);

    JointVector cmd;
    if (config_.action_mode == ActionMode::joint_velocity) {
        fidelity::interpolate_into(action_buffer_, t_arm, buf);
        for (int i = kGantryDof; i < dynamics::kDof; ++i) cmd[i] = buf[i];
        fidelity::interpolate_into(action_buffer_, t_gantry, buf);
        for (int i = 0; i < kGantryDof; ++i) cmd[i] = buf[i];
    } else {
        TaskVector a_arm, a_gantry;
        fidelity::interpolate_into(action_buffer_, t_arm, std::span<double>(a_arm.data(), 5));
        fidelity::interpolate_into(action_buffer_, t_gantry, std::span<double>(a_gantry.data(), 5));
        const JointVector v_arm =
            dynamics::task_space_command(chain, q_, home_task_ + a_arm, config_.task_space).velocities;
        cmd = v_arm;
        if (a_gantry != a_arm) {
            const JointVector v_g =
                dynamics::task_space_command(chain, q_, home_task_ + a_gantry, config_.task_space).velocities;
            cmd.head<kGantryDof>() = v_g.head<kGantryDof>();
        }
    }

    const PaddlePose p0 = dynamics::paddle_pose(chain, q_);
    for (int i = 0; i < dynamics::kDof; ++i) {
        const auto& j = chain.joints[i];
        const double target = std::clamp(cmd[i], -j.velocity_limit, j.velocity_limit);
        const double dv = std::clamp(target - qd_[i], -j.acceleration_limit * h, j.acceleration_limit * h);
        qd_[i] += dv;
        double q = q_[i] + qd_[i] * h;
        if (q < j.lower || q > j.upper) {
            q = std::clamp(q, j.lower, j.upper);
            qd_[i] = 0.0;
        }
        q_[i] = q;
    }
    const PaddlePose p1 = dynamics::paddle_pose(chain, q_);

    const std::size_t first_event = events.size();
    if (!ball_frozen_) advance_ball(h, p0, p1, events);
    time_ += h;
    ball_.time = time_;
    if (!finite(ball_)) throw NumericalDivergence("ball state became non-finite at t=" + std::to_string(time_));

    if (!collided) {
        const auto& s = physics_.surfaces;
        for (const Vec3& pt : dynamics::link_points(chain, q_)) {
            if (std::abs(pt.x()) <= s.table_half_width && std::abs(pt.y()) <= s.table_half_length &&
                pt.z() < s.table_height + kRobotClearance) {
                collided = true;
                emit(EventKind::TABLE, time_, pt, events);
                break;
            }
        }
    }
    push_sensors();
    if (observer_) {
        SubstepTrace tr;
        tr.time = time_;
        tr.ball = ball_;
        tr.joints = q_;
        tr.joint_velocities = qd_;
        tr.paddle = dynamics::paddle_pose(chain, q_, &qd_);
        tr.events.assign(events.begin() + first_event, events.end());
        observer_(tr);
    }
}

void TableTennisEnv::emit(EventKind kind, double t, const Vec3& where, std::vector<GameEvent>& events) {
    events.push_back(GameEvent{kind, t, where});
    const auto& sm = config_.state_machine;
    if (sm.is_terminal(state_)) return;
    state_ = settle(sm, transition(sm, state_, events.back()));
}

void TableTennisEnv::advance_ball(double h, const PaddlePose& p0, const PaddlePose& p1,
                                  std::vector<GameEvent>& events) {
    const auto& s = physics_.surfaces;
    const auto& bp = physics_.ball;
    const double r = bp.radius;
    const Vec3 paddle_velocity = (p1.position - p0.position) / h;

    double elapsed = 0.0;
    for (int contacts = 0; contacts <= kMaxContactsPerSubstep; ++contacts) {
        const double rem = h - elapsed;
        if (rem <= 0.0) break;
        const BallState start = ball_;
        const BallState end = dynamics::integrate_flight(start, bp, rem);

        const auto paddle_at = [&](double tau) { return blend(p0, p1, (elapsed + tau) / h); };
        const auto paddle_gap = [&](const BallState& b, double tau) {
            const PaddlePose p = paddle_at(tau);
            return (b.position - p.position).dot(p.normal);
        };
        const double paddle_side = paddle_gap(start, 0.0) < 0.0 ? -1.0 : 1.0;
        const double net_side = start.position.y() < 0.0 ? -1.0 : 1.0;
        const double net_top = s.table_height + s.net_height;

        // Gap functions: positive while separated, crossing zero at contact.
        const auto gap = [&](Contact c, const BallState& b, double tau) {
            switch (c) {
                case Contact::table: return b.position.z() - r - s.table_height;
                case Contact::floor: return b.position.z() - r - s.floor_height;
                case Contact::net: return net_side * b.position.y() - r;
                case Contact::net_cord:
                    return std::hypot(b.position.y(), b.position.z() - net_top) - r;
                case Contact::paddle: return paddle_side * paddle_gap(b, tau) - r;
                case Contact::none: break;
            }
            return 1.0;
        };
        const auto valid = [&](Contact c, const BallState& b, double tau) {
            const Vec3& p = b.position;
            switch (c) {
                case Contact::table:
                    return std::abs(p.x()) <= s.table_half_width && std::abs(p.y()) <= s.table_half_length;
                case Contact::floor: return true;
                case Contact::net:
                    return std::abs(p.x()) <= s.table_half_width + s.net_overhang && p.z() >= s.table_height &&
                           p.z() <= net_top;
                case Contact::net_cord:
                    return std::abs(p.x()) <= s.table_half_width + s.net_overhang && p.z() > net_top;
                case Contact::paddle: {
                    const PaddlePose pp = paddle_at(tau);
                    const Vec3 d = p - pp.position;
                    const Vec3 in_plane = d - d.dot(pp.normal) * pp.normal;
                    const double vn = (b.velocity - paddle_velocity).dot(pp.normal);
                    return in_plane.norm() <= s.paddle_radius && vn * paddle_side < 0.0;
                }
                case Contact::none: break;
            }
            return false;
        };

        Contact best = Contact::none;
        double best_tau = rem;
        BallState best_state = end;
        for (Contact c : {Contact::table, Contact::floor, Contact::net, Contact::net_cord, Contact::paddle}) {
            const double g0 = gap(c, start, 0.0);
            const double g1 = gap(c, end, rem);
            double tau;
            BallState at;
            if (g0 > 0.0 && g1 <= 0.0) {
                double lo = 0.0, hi = rem;
                for (int it = 0; it < kBisectIterations; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (gap(c, dynamics::integrate_flight(start, bp, mid), mid) > 0.0) lo = mid;
                    else hi = mid;
                }
                tau = hi;
                at = dynamics::integrate_flight(start, bp, tau);
            } else if (c == Contact::paddle && g0 <= 0.0 && g0 > -2.0 * r) {
                tau = 0.0;
                at = start;
            } else {
                continue;
            }
            if (tau > best_tau || (best != Contact::none && tau == best_tau)) continue;
            if (!valid(c, at, tau)) continue;
            best = c;
            best_tau = tau;
            best_state = at;
        }

        if (best == Contact::none) {
            ball_ = end;
            ball_.time = start.time + rem;
            return;
        }
        ball_ = best_state;
        elapsed += best_tau;
        const double contact_time = time_ + elapsed;
        switch (best) {
            case Contact::table:
                ball_ = dynamics::bounce(ball_, Vec3::UnitZ(), bp.restitution * s.table_restitution);
                emit(ball_.position.y() < 0.0 ? EventKind::TABLE_ARM : EventKind::TABLE_OPP, contact_time,
                     ball_.position, events);
                break;
            case Contact::floor:
                ball_.velocity.setZero();
                ball_frozen_ = true;
                emit(EventKind::GROUND, contact_time, ball_.position, events);
                break;
            case Contact::net:
                ball_ = dynamics::bounce(ball_, Vec3(0.0, -net_side, 0.0), s.net_restitution);
                emit(EventKind::NET, contact_time, ball_.position, events);
                break;
            case Contact::net_cord: {
                // Glancing touch on the top cord; the ball may carry on over.
                const Vec3 n = Vec3(0.0, ball_.position.y(), ball_.position.z() - net_top).normalized();
                ball_ = dynamics::bounce(ball_, n, s.net_restitution);
                emit(EventKind::NET, contact_time, ball_.position, events);
                break;
            }
            case Contact::paddle: {
                PaddlePose pp = paddle_at(best_tau);
                pp.velocity = paddle_velocity;
                ball_ = dynamics::paddle_contact(ball_, pp, bp.restitution * s.paddle_restitution).ball;
                emit(EventKind::PADDLE_ARM, contact_time, ball_.position, events);
                break;
            }
            case Contact::none: break;
        }
        if (ball_frozen_) return;
    }
}

}  // namespace ttlab::env
