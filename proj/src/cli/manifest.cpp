#include "ttlab/cli/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ttlab/core/errors.hpp"

namespace ttlab::cli {
namespace fs = std::filesystem;
using nlohmann::json;

std::string build_revision() {
#ifdef TTLAB_REVISION
    return TTLAB_REVISION;
#else
    return "unknown";
#endif
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string make_run_id(const std::string& kind, const std::string& config_hash, std::uint64_t seed) {
    return kind + "-" + config_hash.substr(0, 8) + "-s" + std::to_string(seed);
}

std::string manifest_to_json(const RunManifest& m) {
    json j;
    j["version"] = m.version;
    j["kind"] = m.kind;
    j["run_id"] = m.run_id;
    j["config_hash"] = m.config_hash;
    j["revision"] = m.revision;
    j["start_time"] = m.start_time;
    j["command"] = m.command;
    j["seeds"] = m.seeds;
    j["profile"] = m.profile;
    j["config"] = m.config;
    return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
    const json j = json::parse(text);
    RunManifest m;
    m.version = j.at("version").get<int>();
    if (m.version != kManifestVersion) throw Error("unsupported manifest version " + std::to_string(m.version));
    m.kind = j.at("kind").get<std::string>();
    m.run_id = j.at("run_id").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.revision = j.value("revision", "unknown");
    m.start_time = j.value("start_time", "");
    m.command = j.value("command", std::vector<std::string>{});
    m.seeds = j.value("seeds", std::vector<std::uint64_t>{});
    m.profile = j.value("profile", "");
    m.config = j.value("config", "");
    return m;
}

void write_manifest(const fs::path& dir, const RunManifest& m) {
    fs::create_directories(dir);
    const fs::path path = dir / kManifestFile;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << manifest_to_json(m);
}

RunManifest read_manifest(const fs::path& dir) {
    const fs::path path = dir / kManifestFile;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("missing manifest: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return manifest_from_json(ss.str());
    } catch (const json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

}  // namespace ttlab::cli
