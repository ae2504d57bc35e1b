#include "ttlab/trainer/checkpoint.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ttlab/core/errors.hpp"

namespace ttlab::trainer {
namespace {

using nlohmann::json;

json to_json(const VecX& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

VecX vec_from(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const VecX>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& c) {
    json j;
    j["version"] = c.version;
    j["iteration"] = c.iteration;
    if (c.policy) {
        j["policy"] = {{"arch", std::string(to_string(c.policy->arch))},
                       {"feature_dim", c.policy->feature_dim},
                       {"history", c.policy->history},
                       {"action_dim", c.policy->action_dim},
                       {"channels", c.policy->channels},
                       {"observation_mode", c.policy->observation_mode}};
    }
    j["theta"] = to_json(c.theta);
    j["norm"] = {{"count", c.norm.count}, {"mean", to_json(c.norm.mean)}, {"m2", to_json(c.norm.m2)}};
    j["rng_state"] = c.rng_state;
    j["solved"] = c.solved;
    j["solve_iteration"] = c.solve_iteration;
    return j.dump(1) + "\n";
}

Checkpoint parse_checkpoint(const std::string& text) {
    const json j = json::parse(text);
    Checkpoint c;
    c.version = j.at("version").get<int>();
    if (c.version != kCheckpointVersion)
        throw Error("unsupported checkpoint version " + std::to_string(c.version));
    c.iteration = j.at("iteration").get<int>();
    if (j.contains("policy")) {
        const json& p = j["policy"];
        PolicySpec s;
        s.arch = policy_arch_from_string(p.at("arch").get<std::string>());
        s.feature_dim = p.at("feature_dim").get<int>();
        s.history = p.at("history").get<int>();
        s.action_dim = p.at("action_dim").get<int>();
        s.channels = p.at("channels").get<int>();
        s.observation_mode = p.at("observation_mode").get<std::string>();
        c.policy = s;
    }
    c.theta = vec_from(j.at("theta"));
    c.norm.count = j.at("norm").at("count").get<double>();
    c.norm.mean = vec_from(j["norm"].at("mean"));
    c.norm.m2 = vec_from(j["norm"].at("m2"));
    c.rng_state = j.value("rng_state", "");
    c.solved = j.value("solved", false);
    c.solve_iteration = j.value("solve_iteration", -1);
    return c;
}

void save_checkpoint(const Checkpoint& c, const std::string& path) {
    // Write then rename so an interrupted save never leaves a truncated file.
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw Error("cannot write checkpoint '" + tmp + "'");
        f << serialize_checkpoint(c);
        if (!f) throw Error("failed writing checkpoint '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open checkpoint '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    try {
        return parse_checkpoint(ss.str());
    } catch (const json::exception& e) {
        throw Error("malformed checkpoint '" + path + "': " + e.what());
    }
}

}  // namespace ttlab::trainer
