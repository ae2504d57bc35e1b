#include "ttlab/env/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "ttlab/core/errors.hpp"

namespace ttlab::env {
namespace {

using dynamics::JointVector;
using dynamics::kDof;

bool has_event(const RewardContext& ctx, EventKind k) {
    return std::any_of(ctx.events.begin(), ctx.events.end(), [k](const GameEvent& e) { return e.kind == k; });
}

/// Maps a limit list onto the joints, right-aligned; unlimited joints get +inf.
JointVector align_limits(const std::vector<double>& limits) {
    JointVector out = JointVector::Constant(std::numeric_limits<double>::infinity());
    const int n = std::min<int>(limits.size(), kDof);
    for (int i = 0; i < n; ++i) out[kDof - n + i] = limits[limits.size() - n + i];
    return out;
}

class HitBall : public RewardComponent {
public:
    void reset() override { granted_ = false; }
    double step(const RewardContext& ctx) override {
        if (granted_ || !has_event(ctx, EventKind::PADDLE_ARM)) return 0.0;
        granted_ = true;
        return 1.0;
    }
    double max_per_episode() const override { return 1.0; }

private:
    bool granted_ = false;
};

class LandBall : public RewardComponent {
public:
    void reset() override { granted_ = false; }
    double step(const RewardContext& ctx) override {
        if (granted_ || ctx.outcome != PointOutcome::win) return 0.0;
        granted_ = true;
        return 1.0;
    }
    double max_per_episode() const override { return 1.0; }

private:
    bool granted_ = false;
};

/// 1 - fraction of (timestep, joint) points that violate a limit, paid once
/// at the end of the episode.
class ViolationFraction : public RewardComponent {
public:
    void reset() override {
        points_ = 0;
        violations_ = 0;
    }
    double step(const RewardContext& ctx) override {
        violations_ += count(ctx);
        points_ += kDof;
        if (!ctx.episode_end) return 0.0;
        return points_ == 0 ? 1.0 : 1.0 - static_cast<double>(violations_) / static_cast<double>(points_);
    }
    double max_per_episode() const override { return 1.0; }

protected:
    virtual int count(const RewardContext& ctx) = 0;

private:
    long points_ = 0;
    long violations_ = 0;
};

class VelocityPenalty : public ViolationFraction {
public:
    explicit VelocityPenalty(const RewardParams& p) : limits_(align_limits(p.velocity_limits)) {}

protected:
    int count(const RewardContext& ctx) override {
        return ((*ctx.joint_velocities).cwiseAbs().array() > limits_.array()).count();
    }

private:
    JointVector limits_;
};

class AccelerationPenalty : public ViolationFraction {
public:
    explicit AccelerationPenalty(const RewardParams& p) : limits_(align_limits(p.acceleration_limits)) {}
    void reset() override {
        ViolationFraction::reset();
        prev_ = JointVector::Zero();
    }

protected:
    int count(const RewardContext& ctx) override {
        const JointVector accel = *ctx.joint_velocities - prev_;
        prev_ = *ctx.joint_velocities;
        return (accel.cwiseAbs().array() > limits_.array()).count();
    }

private:
    JointVector limits_;
    JointVector prev_ = JointVector::Zero();
};

class JerkPenalty : public ViolationFraction {
public:
    explicit JerkPenalty(const RewardParams& p) : limits_(align_limits(p.jerk_limits)) {}
    void reset() override {
        ViolationFraction::reset();
        prev_v_ = JointVector::Zero();
        prev_a_ = JointVector::Zero();
    }

protected:
    int count(const RewardContext& ctx) override {
        const JointVector accel = *ctx.joint_velocities - prev_v_;
        const JointVector jerk = accel - prev_a_;
        prev_v_ = *ctx.joint_velocities;
        prev_a_ = accel;
        return (jerk.cwiseAbs().array() > limits_.array()).count();
    }

private:
    JointVector limits_;
    JointVector prev_v_ = JointVector::Zero();
    JointVector prev_a_ = JointVector::Zero();
};

class JointAngle : public ViolationFraction {
public:
    explicit JointAngle(const RewardParams& p) : buffer_(p.joint_angle_buffer) {}

protected:
    int count(const RewardContext& ctx) override {
        int n = 0;
        for (int i = 0; i < kDof; ++i) {
            const auto& j = ctx.chain->joints[i];
            const double q = (*ctx.joint_positions)[i];
            if (q < j.lower + buffer_ || q > j.upper - buffer_) ++n;
        }
        return n;
    }

private:
    double buffer_;
};

class BadCollision : public RewardComponent {
public:
    double step(const RewardContext& ctx) override {
        for (const auto& e : ctx.events) {
            if (is_robot_collision(e.kind)) return -1.0;
        }
        return 0.0;
    }
    double max_per_episode() const override { return 0.0; }
};

class BaseRotateBackwards : public RewardComponent {
public:
    explicit BaseRotateBackwards(const RewardParams& p) : joint_(p.base_joint), threshold_(p.base_backwards_threshold) {}
    double step(const RewardContext& ctx) override {
        return (*ctx.joint_positions)[joint_] < threshold_ ? -1.0 : 0.0;
    }
    double max_per_episode() const override { return 0.0; }

private:
    int joint_;
    double threshold_;
};

class PaddleHeight : public RewardComponent {
public:
    explicit PaddleHeight(const RewardParams& p) : min_height_(p.paddle_min_height) {}
    double step(const RewardContext& ctx) override {
        return ctx.paddle->position.z() < ctx.surfaces->table_height + min_height_ ? -1.0 : 0.0;
    }
    double max_per_episode() const override { return 0.0; }

private:
    double min_height_;
};

/// After a hit that does not produce a point, pays max(0, 1 - d/range) once,
/// where d is how far short of the net plane the ball stayed.
class NearNetBonus : public RewardComponent {
public:
    explicit NearNetBonus(const RewardParams& p) : range_(p.near_net_range) {}
    void reset() override {
        hit_ = false;
        closest_ = std::numeric_limits<double>::infinity();
    }
    double step(const RewardContext& ctx) override {
        if (has_event(ctx, EventKind::PADDLE_ARM)) hit_ = true;
        if (hit_) closest_ = std::min(closest_, std::max(0.0, -ctx.ball->position.y()));
        if (!ctx.episode_end || !hit_ || ctx.outcome == PointOutcome::win) return 0.0;
        return std::max(0.0, 1.0 - closest_ / range_);
    }
    // Only paid when land_ball is not, so it never raises the episode maximum.
    double max_per_episode() const override { return 0.0; }

private:
    double range_;
    bool hit_ = false;
    double closest_ = std::numeric_limits<double>::infinity();
};

/// After a hit that does not produce a point, pays max(0, 1 - d/range) once,
/// where d is the horizontal distance from the ball's first contact after the
/// hit (or its position at the episode end) to the center of the opponent half.
class LandingDistance : public RewardComponent {
public:
    explicit LandingDistance(const RewardParams& p) : range_(p.landing_range) {}
    void reset() override {
        hit_ = false;
        landed_ = false;
    }
    double step(const RewardContext& ctx) override {
        for (const auto& e : ctx.events) {
            if (e.kind == EventKind::PADDLE_ARM) {
                hit_ = true;
            } else if (hit_ && !landed_ &&
                       (e.kind == EventKind::TABLE_OPP || e.kind == EventKind::TABLE_ARM || e.kind == EventKind::NET ||
                        e.kind == EventKind::GROUND)) {
                landed_ = true;
                where_ = e.position;
            }
        }
        if (!ctx.episode_end || !hit_ || ctx.outcome == PointOutcome::win) return 0.0;
        const Vec3 p = landed_ ? where_ : ctx.ball->position;
        const double dx = p.x();
        const double dy = p.y() - 0.5 * ctx.surfaces->table_half_length;
        return std::max(0.0, 1.0 - std::sqrt(dx * dx + dy * dy) / range_);
    }
    // Only paid when land_ball is not, so it never raises the episode maximum.
    double max_per_episode() const override { return 0.0; }

private:
    double range_;
    bool hit_ = false;
    bool landed_ = false;
    Vec3 where_ = Vec3::Zero();
};

/// Shaping toward contact: max(0, 1 - d/range) once per episode, d being the
/// closest ball-to-paddle distance before the first hit (0 once hit).
class BallProximity : public RewardComponent {
public:
    explicit BallProximity(const RewardParams& p) : range_(p.proximity_range) {}
    void reset() override {
        hit_ = false;
        closest_ = std::numeric_limits<double>::infinity();
    }
    double step(const RewardContext& ctx) override {
        if (has_event(ctx, EventKind::PADDLE_ARM)) hit_ = true;
        if (hit_) {
            closest_ = 0.0;
        } else {
            closest_ = std::min(closest_, (ctx.ball->position - ctx.paddle->position).norm());
        }
        if (!ctx.episode_end) return 0.0;
        return std::max(0.0, 1.0 - closest_ / range_);
    }
    double max_per_episode() const override { return 1.0; }

private:
    double range_;
    bool hit_ = false;
    double closest_ = std::numeric_limits<double>::infinity();
};

std::map<std::string, RewardFactory>& registry() {
    static std::map<std::string, RewardFactory> r = [] {
        std::map<std::string, RewardFactory> m;
        m["hit_ball"] = [](const RewardParams&) { return std::make_unique<HitBall>(); };
        m["land_ball"] = [](const RewardParams&) { return std::make_unique<LandBall>(); };
        m["velocity_penalty"] = [](const RewardParams& p) { return std::make_unique<VelocityPenalty>(p); };
        m["acceleration_penalty"] = [](const RewardParams& p) { return std::make_unique<AccelerationPenalty>(p); };
        m["jerk_penalty"] = [](const RewardParams& p) { return std::make_unique<JerkPenalty>(p); };
        m["joint_angle"] = [](const RewardParams& p) { return std::make_unique<JointAngle>(p); };
        m["bad_collision"] = [](const RewardParams&) { return std::make_unique<BadCollision>(); };
        m["base_rotate_backwards"] = [](const RewardParams& p) { return std::make_unique<BaseRotateBackwards>(p); };
        m["paddle_height"] = [](const RewardParams& p) { return std::make_unique<PaddleHeight>(p); };
        m["near_net_bonus"] = [](const RewardParams& p) { return std::make_unique<NearNetBonus>(p); };
        m["landing_distance"] = [](const RewardParams& p) { return std::make_unique<LandingDistance>(p); };
        m["ball_proximity"] = [](const RewardParams& p) { return std::make_unique<BallProximity>(p); };
        return m;
    }();
    return r;
}

}  // namespace

void register_reward(const std::string& name, RewardFactory factory) { registry()[name] = std::move(factory); }

bool is_registered_reward(const std::string& name) { return registry().count(name) != 0; }

std::vector<std::string> registered_reward_names() {
    std::vector<std::string> names;
    for (const auto& [n, f] : registry()) names.push_back(n);
    return names;
}

void RewardSpec::validate() const {
    std::set<std::string> seen;
    for (const auto& t : terms) {
        if (!is_registered_reward(t.name)) throw ConfigError("unknown reward component '" + t.name + "'");
        if (!seen.insert(t.name).second) throw ConfigError("reward component '" + t.name + "' listed twice");
        if (!std::isfinite(t.weight)) throw ConfigError("reward component '" + t.name + "' has a non-finite weight");
    }
    if (params.base_joint < 0 || params.base_joint >= dynamics::kDof) throw ConfigError("reward base_joint out of range");
}

RewardSpec RewardSpec::shaped_default() {
    RewardSpec s;
    s.terms = {{"hit_ball", 1.0},         {"land_ball", 1.0},      {"velocity_penalty", 0.4},
               {"acceleration_penalty", 0.3}, {"jerk_penalty", 0.3}, {"joint_angle", 1.0},
               {"bad_collision", 1.0},    {"base_rotate_backwards", 1.0}, {"paddle_height", 1.0}};
    return s;
}

RewardSpec RewardSpec::evaluation() {
    RewardSpec s;
    s.terms = {{"hit_ball", 1.0}, {"land_ball", 1.0}};
    return s;
}

RewardManager::RewardManager(const RewardSpec& spec) {
    spec.validate();
    for (const auto& t : spec.terms) terms_.emplace_back(t, registry().at(t.name)(spec.params));
}

void RewardManager::reset() {
    for (auto& [t, c] : terms_) c->reset();
}

RewardBreakdown RewardManager::step(const RewardContext& ctx) {
    RewardBreakdown out;
    out.components.reserve(terms_.size());
    for (auto& [t, c] : terms_) {
        const double v = c->step(ctx);
        const double w = t.weight == 0.0 ? 0.0 : t.weight * v;
        out.components.emplace_back(t.name, w);
        out.total += w;
    }
    return out;
}

double RewardManager::max_return() const {
    // Extended precision so that 0.4 + 0.3 + 0.3 sums to exactly 1.
    long double m = 0.0L;
    for (const auto& [t, c] : terms_) {
        if (t.weight > 0.0) m += static_cast<long double>(t.weight) * c->max_per_episode();
    }
    return static_cast<double>(m);
}

RewardBreakdown compute_reward(RewardManager& manager, const RewardContext& ctx) { return manager.step(ctx); }

}  // namespace ttlab::env
