#pragma once

#include <set>
#include <string>
#include <vector>

#include "ttlab/cli/config_format.hpp"
#include "ttlab/env/config.hpp"
#include "ttlab/trainer/policy.hpp"
#include "ttlab/trainer/train.hpp"

namespace ttlab::cli {

enum class Profile { desk, paper };
std::string to_string(Profile p);
Profile profile_from_string(const std::string& s);

/// Typed reads from a ConfigDoc. Every read marks the key as used; errors
/// carry the file and line the value came from.
class Binder {
public:
    explicit Binder(const ConfigDoc& doc) : doc_(doc) {}

    bool has(const std::string& key) const { return doc_.has(key); }
    bool read(const std::string& key, double& out);
    bool read(const std::string& key, int& out);
    bool read(const std::string& key, std::uint64_t& out);
    bool read(const std::string& key, bool& out);
    bool read(const std::string& key, std::string& out);
    bool read(const std::string& key, std::vector<double>& out);
    bool read(const std::string& key, std::vector<std::string>& out);
    /// A scalar sets all three components; a list must have three.
    bool read(const std::string& key, Vec3& out);

    /// Keys under `prefix.` present in the document, without the prefix.
    std::vector<std::string> children(const std::string& prefix) const;
    void mark_used(const std::string& key) { used_.insert(key); }
    /// Throws for the first key under one of `prefixes` that nothing read.
    void reject_unused(const std::vector<std::string>& prefixes) const;

    [[noreturn]] void fail(const std::string& key, const std::string& what) const;

private:
    const ConfigValue* scalar(const std::string& key);
    const ConfigDoc& doc_;
    std::set<std::string> used_;
};

/// Environment defaults of a profile. The desk profile is the simplified
/// environment used for desk-scale studies; paper is the full environment.
env::EnvConfig profile_env(Profile p);
trainer::TrainerConfig profile_trainer(Profile p);

/// Overlays keys under `prefix.` onto `cfg` and validates the result.
void bind_env(Binder& b, const std::string& prefix, env::EnvConfig& cfg);
void bind_trainer(Binder& b, const std::string& prefix, trainer::TrainerConfig& cfg);

struct RunConfig {
    Profile profile = Profile::desk;
    env::EnvConfig env;
    trainer::TrainerConfig trainer;
    trainer::PolicyArch arch = trainer::PolicyArch::linear;
    int channels = 8;

    trainer::PolicySpec policy_spec() const;
};

/// Binds `profile`, `env.*`, `trainer.*` and `policy.*`. `profile` in the
/// document wins over `fallback`. Keys under `extra_prefixes` are left for
/// the caller; anything else unknown is an error.
RunConfig bind_run(const ConfigDoc& doc, Profile fallback, const std::vector<std::string>& extra_prefixes = {});

}  // namespace ttlab::cli
