#include "ttlab/env/episode_log.hpp"

#include <fstream>
#include "json.hpp"

#include "ttlab/core/errors.hpp"

namespace ttlab::env {
namespace {

nlohmann::json vec(const Eigen::Ref<const VecX>& v) {
    return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace

void EpisodeLog::begin(const TableTennisEnv& env, std::uint64_t episode_seed) {
    seed_ = episode_seed;
    launch_ = env.launch_state();
    latencies_ = env.latencies();
    steps_.clear();
}

void EpisodeLog::record(const VecX& action, const StepResult& result) {
    steps_.push_back(LoggedStep{action, result.info, result.reward, result.done});
}

double EpisodeLog::episode_return() const {
    double r = 0.0;
    for (const auto& s : steps_) r += s.reward;
    return r;
}

void EpisodeLog::write_jsonl(std::ostream& os) const {
    nlohmann::json head;
    head["schema"] = kEpisodeLogSchema;
    head["seed"] = seed_;
    head["launch_position"] = vec(launch_.position);
    head["launch_velocity"] = vec(launch_.velocity);
    head["latencies_s"] = latencies_.seconds;
    os << head.dump() << '\n';
    for (const auto& s : steps_) {
        nlohmann::json j;
        j["step"] = s.info.step_index;
        j["t"] = s.info.time;
        j["action"] = vec(s.action);
        j["reward"] = s.reward;
        j["state"] = s.info.state;
        j["done"] = s.done;
        if (s.done) j["done_reason"] = std::string(to_string(s.info.done_reason));
        nlohmann::json ev = nlohmann::json::array();
        for (const auto& e : s.info.events)
            ev.push_back({{"kind", std::string(to_string(e.kind))}, {"t", e.time}, {"pos", vec(e.position)}});
        j["events"] = std::move(ev);
        nlohmann::json terms = nlohmann::json::object();
        for (const auto& [name, value] : s.info.reward.components) terms[name] = value;
        j["terms"] = std::move(terms);
        const StageTimes& st = s.info.stages;
        j["stages"] = {{"ball_observed", st.ball_observed},     {"arm_observed", st.arm_observed},
                       {"gantry_observed", st.gantry_observed}, {"policy", st.policy},
                       {"arm_action_applied", st.arm_action_applied},
                       {"gantry_action_applied", st.gantry_action_applied}};
        os << j.dump() << '\n';
    }
}

void EpisodeLog::write_jsonl(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw Error("cannot open episode log '" + path + "' for writing");
    write_jsonl(f);
}

}  // namespace ttlab::env
