#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ttlab::cli {

inline constexpr int kManifestVersion = 1;
inline constexpr const char* kManifestFile = "manifest.json";

/// Identifies one run or study directory.
struct RunManifest {
    int version = kManifestVersion;
    std::string kind;  ///< train, eval, study, bias-study
    std::string run_id;
    std::string config_hash;
    std::string revision;
    std::string start_time;  ///< UTC, ISO 8601
    std::vector<std::string> command;
    std::vector<std::uint64_t> seeds;
    std::string profile;
    /// Canonical serialized config the run used.
    std::string config;
};

/// Build revision baked in at configure time, or "unknown".
std::string build_revision();
std::string utc_timestamp();
std::string make_run_id(const std::string& kind, const std::string& config_hash, std::uint64_t seed);

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);
void write_manifest(const std::filesystem::path& dir, const RunManifest& m);
/// Throws Error naming the path when the file is missing or malformed.
RunManifest read_manifest(const std::filesystem::path& dir);

}  // namespace ttlab::cli
