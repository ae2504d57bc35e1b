#include "ttlab/cli/config_binding.hpp"

#include <charconv>
#include <cmath>

namespace ttlab::cli {

using env::EnvConfig;
using trainer::TrainerConfig;

std::string to_string(Profile p) { return p == Profile::desk ? "desk" : "paper"; }

Profile profile_from_string(const std::string& s) {
    if (s == "desk") return Profile::desk;
    if (s == "paper") return Profile::paper;
    throw ConfigError("unknown profile '" + s + "' (expected desk or paper)");
}

namespace {

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto r = std::from_chars(b, e, out);
    return r.ec == std::errc{} && r.ptr == e && std::isfinite(out);
}

template <class Int>
bool parse_int(const std::string& s, Int& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto r = std::from_chars(b, e, out);
    return r.ec == std::errc{} && r.ptr == e;
}

}  // namespace

void Binder::fail(const std::string& key, const std::string& what) const {
    if (doc_.has(key)) {
        const auto& w = doc_.at(key).where;
        throw ConfigError(key + ": " + what, w.source, w.line);
    }
    throw ConfigError(key + ": " + what);
}

const ConfigValue* Binder::scalar(const std::string& key) {
    if (!doc_.has(key)) return nullptr;
    used_.insert(key);
    const ConfigValue& v = doc_.at(key);
    if (v.is_list) fail(key, "expected a single value, got a list");
    return &v;
}

bool Binder::read(const std::string& key, double& out) {
    const ConfigValue* v = scalar(key);
    if (!v) return false;
    if (!parse_double(v->scalar, out)) fail(key, "expected a number, got '" + v->scalar + "'");
    return true;
}

bool Binder::read(const std::string& key, int& out) {
    const ConfigValue* v = scalar(key);
    if (!v) return false;
    if (!parse_int(v->scalar, out)) fail(key, "expected an integer, got '" + v->scalar + "'");
    return true;
}

bool Binder::read(const std::string& key, std::uint64_t& out) {
    const ConfigValue* v = scalar(key);
    if (!v) return false;
    if (!parse_int(v->scalar, out)) fail(key, "expected a non-negative integer, got '" + v->scalar + "'");
    return true;
}

bool Binder::read(const std::string& key, bool& out) {
    const ConfigValue* v = scalar(key);
    if (!v) return false;
    const std::string& s = v->scalar;
    if (s == "true" || s == "yes" || s == "on" || s == "1") {
        out = true;
    } else if (s == "false" || s == "no" || s == "off" || s == "0") {
        out = false;
    } else {
        fail(key, "expected true or false, got '" + s + "'");
    }
    return true;
}

bool Binder::read(const std::string& key, std::string& out) {
    const ConfigValue* v = scalar(key);
    if (!v) return false;
    out = v->scalar;
    return true;
}

bool Binder::read(const std::string& key, std::vector<double>& out) {
    if (!doc_.has(key)) return false;
    used_.insert(key);
    const ConfigValue& v = doc_.at(key);
    const std::vector<std::string> items = v.is_list ? v.items : std::vector<std::string>{v.scalar};
    out.clear();
    for (const auto& s : items) {
        double d = 0.0;
        if (!parse_double(s, d)) fail(key, "expected numbers, got '" + s + "'");
        out.push_back(d);
    }
    return true;
}

bool Binder::read(const std::string& key, std::vector<std::string>& out) {
    if (!doc_.has(key)) return false;
    used_.insert(key);
    const ConfigValue& v = doc_.at(key);
    out = v.is_list ? v.items : std::vector<std::string>{v.scalar};
    return true;
}

bool Binder::read(const std::string& key, Vec3& out) {
    std::vector<double> xs;
    if (!read(key, xs)) return false;
    if (xs.size() == 1) {
        out = Vec3::Constant(xs[0]);
    } else if (xs.size() == 3) {
        out = Vec3(xs[0], xs[1], xs[2]);
    } else {
        fail(key, "expected 1 or 3 numbers, got " + std::to_string(xs.size()));
    }
    return true;
}

std::vector<std::string> Binder::children(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : doc_.subtree(prefix).entries()) out.push_back(k);
    return out;
}

void Binder::reject_unused(const std::vector<std::string>& prefixes) const {
    for (const auto& [k, v] : doc_.entries()) {
        if (used_.count(k)) continue;
        for (const auto& p : prefixes) {
            if (k == p || k.rfind(p + ".", 0) == 0) {
                throw ConfigError("unknown key '" + k + "'", v.where.source, v.where.line);
            }
        }
    }
}

namespace {

void read_interval(Binder& b, const std::string& key, env::Interval& out) {
    std::vector<double> xs;
    if (!b.read(key, xs)) return;
    if (xs.size() != 2) b.fail(key, "expected [min, max]");
    out = {xs[0], xs[1]};
}

void read_range(Binder& b, const std::string& key, fidelity::UniformRange& out) {
    std::vector<double> xs;
    if (!b.read(key, xs)) return;
    if (xs.size() == 1) {
        out = {xs[0], 0.0};
    } else if (xs.size() == 2) {
        out = {xs[0], xs[1]};
    } else {
        b.fail(key, "expected [center, half_range] or a constant");
    }
}

template <class Fn>
void checked(Binder& b, const std::string& key, Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        b.fail(key, e.what());
    }
}

std::pair<std::string, std::string> split2(Binder& b, const std::string& key, const std::string& s) {
    const auto sp = s.find(' ');
    if (sp == std::string::npos) b.fail(key, "expected two words in '" + s + "'");
    std::string first = s.substr(0, sp);
    std::string rest = s.substr(s.find_first_not_of(' ', sp));
    return {first, rest};
}

void bind_state_machine(Binder& b, const std::string& p, env::StateMachineSpec& sm) {
    std::string preset;
    if (b.read(p + ".preset", preset)) {
        if (preset != "ball_return") b.fail(p + ".preset", "unknown state machine preset '" + preset + "'");
        sm = env::StateMachineSpec::ball_return();
    }
    b.read(p + ".states", sm.states);
    b.read(p + ".initial", sm.initial);
    b.read(p + ".fallback", sm.fallback);
    std::vector<std::string> rows;
    if (b.read(p + ".transitions", rows)) {
        sm.transitions.clear();
        for (const auto& r : rows) {
            auto [from, rest] = split2(b, p + ".transitions", r);
            auto [ev, to] = split2(b, p + ".transitions", rest);
            auto kind = env::event_kind_from_string(ev);
            if (!kind) b.fail(p + ".transitions", "unknown event '" + ev + "'");
            sm.transitions[{from, *kind}] = to;
        }
    }
    if (b.read(p + ".immediate", rows)) {
        sm.immediate.clear();
        for (const auto& r : rows) {
            auto [from, to] = split2(b, p + ".immediate", r);
            sm.immediate[from] = to;
        }
    }
    if (b.read(p + ".terminal", rows)) {
        sm.terminal.clear();
        for (const auto& r : rows) {
            auto [state, outcome] = split2(b, p + ".terminal", r);
            if (outcome == "win") {
                sm.terminal[state] = env::PointOutcome::win;
            } else if (outcome == "lose") {
                sm.terminal[state] = env::PointOutcome::lose;
            } else if (outcome == "none") {
                sm.terminal[state] = env::PointOutcome::none;
            } else {
                b.fail(p + ".terminal", "outcome must be win, lose or none");
            }
        }
    }
}

void bind_rewards(Binder& b, const std::string& p, env::RewardSpec& r) {
    std::string preset;
    if (b.read(p + ".preset", preset)) {
        const env::RewardParams keep = r.params;
        if (preset == "shaped") {
            r = env::RewardSpec::shaped_default();
        } else if (preset == "evaluation") {
            r = env::RewardSpec::evaluation();
        } else if (preset == "desk") {
            r = profile_env(Profile::desk).rewards;
        } else {
            b.fail(p + ".preset", "unknown reward preset '" + preset + "' (shaped, evaluation, desk)");
        }
        r.params = keep;
    }
    std::vector<std::string> names;
    std::vector<double> weights;
    const bool have_names = b.read(p + ".terms", names);
    const bool have_weights = b.read(p + ".weights", weights);
    if (have_names) {
        if (!have_weights) weights.assign(names.size(), 1.0);
        if (weights.size() != names.size()) b.fail(p + ".weights", "needs one weight per term");
        r.terms.clear();
        for (std::size_t i = 0; i < names.size(); ++i) r.terms.push_back({names[i], weights[i]});
    } else if (have_weights) {
        if (weights.size() != r.terms.size()) b.fail(p + ".weights", "needs one weight per term");
        for (std::size_t i = 0; i < weights.size(); ++i) r.terms[i].weight = weights[i];
    }
    for (const auto& name : b.children(p + ".weight")) {
        double w = 0.0;
        b.read(p + ".weight." + name, w);
        bool found = false;
        for (auto& t : r.terms) {
            if (t.name == name) {
                t.weight = w;
                found = true;
            }
        }
        if (!found) r.terms.push_back({name, w});
    }
    const std::string q = p + ".params";
    auto& rp = r.params;
    b.read(q + ".velocity_limits", rp.velocity_limits);
    b.read(q + ".acceleration_limits", rp.acceleration_limits);
    b.read(q + ".jerk_limits", rp.jerk_limits);
    b.read(q + ".joint_angle_buffer", rp.joint_angle_buffer);
    b.read(q + ".base_joint", rp.base_joint);
    b.read(q + ".base_backwards_threshold", rp.base_backwards_threshold);
    b.read(q + ".paddle_min_height", rp.paddle_min_height);
    b.read(q + ".near_net_range", rp.near_net_range);
    b.read(q + ".proximity_range", rp.proximity_range);
    b.read(q + ".landing_range", rp.landing_range);
    checked(b, p + ".terms", [&] { r.validate(); });
}

void bind_chain(Binder& b, const std::string& p, dynamics::KinematicChain& chain) {
    for (auto& j : chain.joints) {
        const std::string q = p + "." + j.name;
        b.read(q + ".lower", j.lower);
        b.read(q + ".upper", j.upper);
        b.read(q + ".velocity_limit", j.velocity_limit);
        b.read(q + ".acceleration_limit", j.acceleration_limit);
        b.read(q + ".jerk_limit", j.jerk_limit);
        Vec3 offset;
        if (b.read(q + ".offset", offset)) j.origin.translation() = offset;
    }
    Vec3 ee;
    if (b.read(p + ".end_effector_offset", ee)) chain.end_effector_offset.translation() = ee;
}

constexpr std::pair<const char*, fidelity::LatencyComponent> kLatencyKeys[] = {
    {"ball_obs", fidelity::LatencyComponent::ball_obs},
    {"arm_obs", fidelity::LatencyComponent::arm_obs},
    {"gantry_obs", fidelity::LatencyComponent::gantry_obs},
    {"arm_action", fidelity::LatencyComponent::arm_action},
    {"gantry_action", fidelity::LatencyComponent::gantry_action},
};

}  // namespace

EnvConfig profile_env(Profile p) {
    EnvConfig c;
    if (p == Profile::paper) return c;
    c.action_mode = env::ActionMode::task_position;
    c.observation_mode = env::ObservationMode::task;
    c.ball_distribution = env::BallDistribution::tiny();
    c.fidelity.randomization.table_restitution.half_range = 0.0;
    c.fidelity.randomization.paddle_restitution.half_range = 0.0;
    c.rewards.terms = {{"hit_ball", 1.0}, {"land_ball", 1.0}, {"ball_proximity", 1.0}, {"landing_distance", 0.5}};
    return c;
}

TrainerConfig profile_trainer(Profile p) {
    return p == Profile::desk ? TrainerConfig::desk() : TrainerConfig::paper();
}

void bind_env(Binder& b, const std::string& p, EnvConfig& c) {
    b.read(p + ".control_hz", c.control_hz);
    std::string s;
    if (b.read(p + ".action_mode", s)) {
        if (s == "joint_velocity") {
            c.action_mode = env::ActionMode::joint_velocity;
        } else if (s == "task_position") {
            c.action_mode = env::ActionMode::task_position;
        } else {
            b.fail(p + ".action_mode", "expected joint_velocity or task_position");
        }
    }
    if (b.read(p + ".observation_mode", s)) {
        if (s == "joint") {
            c.observation_mode = env::ObservationMode::joint;
        } else if (s == "task") {
            c.observation_mode = env::ObservationMode::task;
        } else {
            b.fail(p + ".observation_mode", "expected joint or task");
        }
    }
    b.read(p + ".max_episode_steps", c.done.max_episode_steps);
    b.read(p + ".home_perturbation", c.home_perturbation);
    b.read(p + ".seed", c.seed);
    std::vector<double> home;
    if (b.read(p + ".home", home)) {
        if (home.size() != dynamics::kDof) b.fail(p + ".home", "expected 8 joint values");
        for (int i = 0; i < dynamics::kDof; ++i) c.home[i] = home[i];
    }

    const std::string bd = p + ".ball_distribution";
    if (b.read(bd + ".preset", s)) checked(b, bd + ".preset", [&] { c.ball_distribution = env::BallDistribution::preset(s); });
    read_interval(b, bd + ".vel_x", c.ball_distribution.vel_x);
    read_interval(b, bd + ".vel_y", c.ball_distribution.vel_y);
    read_interval(b, bd + ".vel_z", c.ball_distribution.vel_z);
    read_interval(b, bd + ".pos_x", c.ball_distribution.pos_x);
    read_interval(b, bd + ".pos_y", c.ball_distribution.pos_y);
    read_interval(b, bd + ".pos_z", c.ball_distribution.pos_z);
    read_interval(b, bd + ".land_x", c.ball_distribution.land_x);
    read_interval(b, bd + ".land_y", c.ball_distribution.land_y);

    const std::string bl = p + ".ball";
    b.read(bl + ".mass", c.ball.mass);
    b.read(bl + ".radius", c.ball.radius);
    b.read(bl + ".drag_coefficient", c.ball.drag_coefficient);
    b.read(bl + ".restitution", c.ball.restitution);
    b.read(bl + ".air_density", c.ball.air_density);
    b.read(bl + ".magnus_enabled", c.ball.magnus_enabled);
    b.read(bl + ".magnus_coefficient", c.ball.magnus_coefficient);
    b.read(bl + ".linear_damping", c.ball.linear_damping);

    const std::string sf = p + ".surfaces";
    b.read(sf + ".table_restitution", c.surfaces.table_restitution);
    b.read(sf + ".paddle_restitution", c.surfaces.paddle_restitution);
    b.read(sf + ".table_height", c.surfaces.table_height);
    b.read(sf + ".table_half_width", c.surfaces.table_half_width);
    b.read(sf + ".table_half_length", c.surfaces.table_half_length);
    b.read(sf + ".net_height", c.surfaces.net_height);
    b.read(sf + ".net_overhang", c.surfaces.net_overhang);
    b.read(sf + ".net_restitution", c.surfaces.net_restitution);
    b.read(sf + ".paddle_mass", c.surfaces.paddle_mass);
    b.read(sf + ".paddle_radius", c.surfaces.paddle_radius);
    b.read(sf + ".floor_height", c.surfaces.floor_height);

    const std::string ts = p + ".task_space";
    b.read(ts + ".damping", c.task_space.damping);
    b.read(ts + ".gain", c.task_space.gain);
    b.read(ts + ".cube_min", c.task_space.cube_min);
    b.read(ts + ".cube_max", c.task_space.cube_max);

    const std::string dn = p + ".done";
    b.read(dn + ".play_min", c.done.play_min);
    b.read(dn + ".play_max", c.done.play_max);
    b.read(dn + ".end_on_collision", c.done.end_on_collision);

    const std::string lt = p + ".latency";
    if (b.read(lt + ".preset", s)) {
        const double scale = c.fidelity.latency.scale;
        if (s == "measured") {
            c.fidelity.latency = fidelity::LatencyModel::measured();
        } else if (s == "zero") {
            c.fidelity.latency = fidelity::LatencyModel::zero();
        } else {
            b.fail(lt + ".preset", "expected measured or zero");
        }
        c.fidelity.latency.scale = scale;
    }
    b.read(lt + ".scale", c.fidelity.latency.scale);
    for (const auto& [name, comp] : kLatencyKeys) {
        std::vector<double> xs;
        const std::string key = lt + "." + name;
        if (!b.read(key, xs)) continue;
        if (xs.size() != 2) b.fail(key, "expected [mean_ms, stddev_ms]");
        c.fidelity.latency.components[static_cast<int>(comp)] = {xs[0], xs[1]};
    }

    b.read(p + ".noise.half_width", c.fidelity.noise.half_width);
    b.read(p + ".noise.bias", c.fidelity.noise.bias);

    const std::string rz = p + ".randomization";
    read_range(b, rz + ".table_restitution", c.fidelity.randomization.table_restitution);
    read_range(b, rz + ".paddle_restitution", c.fidelity.randomization.paddle_restitution);
    read_range(b, rz + ".ball_restitution", c.fidelity.randomization.ball_restitution);
    read_range(b, rz + ".paddle_mass", c.fidelity.randomization.paddle_mass);
    b.read(p + ".buffer_capacity", c.fidelity.buffer_capacity);

    bind_rewards(b, p + ".rewards", c.rewards);
    bind_state_machine(b, p + ".state_machine", c.state_machine);
    bind_chain(b, p + ".chain", c.chain);

    checked(b, p, [&] { c.validate(); });
}

void bind_trainer(Binder& b, const std::string& p, TrainerConfig& t) {
    b.read(p + ".directions", t.directions);
    b.read(p + ".repeats", t.repeats);
    b.read(p + ".elites", t.elites);
    b.read(p + ".sigma", t.sigma);
    b.read(p + ".step_size", t.step_size);
    std::string mode;
    if (b.read(p + ".mode", mode)) {
        if (mode == "ars") {
            t.mode = trainer::EliteMode::ars;
        } else if (mode == "bgs") {
            t.mode = trainer::EliteMode::bgs;
        } else {
            b.fail(p + ".mode", "expected ars or bgs");
        }
    }
    b.read(p + ".orthogonal", t.orthogonal);
    b.read(p + ".normalize_observations", t.normalize_observations);
    b.read(p + ".iterations", t.iterations);
    b.read(p + ".seed", t.seed);
    b.read(p + ".common_random_numbers", t.common_random_numbers);
    b.read(p + ".workers", t.workers);
    b.read(p + ".eval_every", t.eval_every);
    b.read(p + ".eval_episodes", t.eval_episodes);
    b.read(p + ".checkpoint_every", t.checkpoint_every);
    b.read(p + ".solve_fraction", t.solve_fraction);
    b.read(p + ".stop_when_solved", t.stop_when_solved);
    checked(b, p, [&] { t.validate(); });
}

trainer::PolicySpec RunConfig::policy_spec() const {
    trainer::PolicySpec spec = trainer::EnvObjective::matching_policy(env, arch);
    spec.channels = channels;
    spec.validate();
    return spec;
}

RunConfig bind_run(const ConfigDoc& doc, Profile fallback, const std::vector<std::string>& extra_prefixes) {
    Binder b(doc);
    RunConfig r;
    r.profile = fallback;
    std::string s;
    if (b.read("profile", s)) checked(b, "profile", [&] { r.profile = profile_from_string(s); });
    r.env = profile_env(r.profile);
    r.trainer = profile_trainer(r.profile);
    bind_env(b, "env", r.env);
    bind_trainer(b, "trainer", r.trainer);
    if (b.read("policy.arch", s)) checked(b, "policy.arch", [&] { r.arch = trainer::policy_arch_from_string(s); });
    b.read("policy.channels", r.channels);
    checked(b, "policy", [&] { (void)r.policy_spec(); });

    for (const auto& [k, v] : doc.entries()) {
        const std::string top = k.substr(0, k.find('.'));
        if (top == "env" || top == "trainer" || top == "policy" || top == "profile") continue;
        bool extra = false;
        for (const auto& e : extra_prefixes) extra = extra || top == e;
        if (!extra) throw ConfigError("unknown key '" + k + "'", v.where.source, v.where.line);
    }
    b.reject_unused({"env", "trainer", "policy", "profile"});
    return r;
}

}  // namespace ttlab::cli
