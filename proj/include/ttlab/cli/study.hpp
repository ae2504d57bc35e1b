#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ttlab/cli/config_binding.hpp"
#include "ttlab/cli/config_format.hpp"

namespace ttlab::cli {

enum class StudyKind { latency, ball_distribution, observation_noise, physical_params, es_ablation, task_space };
std::string to_string(StudyKind k);
StudyKind study_kind_from_string(const std::string& s);

/// Named set of config overrides applied to the training run only.
struct StudyVariant {
    std::string name;
    ConfigDoc overrides;  ///< keys relative to the run config (env.*, trainer.*, policy.*)
};

/// Sim-to-sim transfer study: each variant trains in a perturbed environment
/// and is scored in one fixed reference environment.
struct StudySpec {
    StudyKind kind = StudyKind::latency;
    std::vector<StudyVariant> variants;
    std::vector<std::uint64_t> seeds{0, 1, 2};
    ConfigDoc base;               ///< shared run config
    ConfigDoc reference;          ///< env.* overrides on top of base for the reference env
    int episodes = 50;
    int repetitions = 3;
    std::uint64_t eval_seed = 0x5eed;
    Profile profile = Profile::desk;

    /// Throws ConfigError.
    void validate() const;

    RunConfig variant_run(const StudyVariant& v) const;
    env::EnvConfig reference_env() const;
    /// Hash of the reference env keys; identical for every variant.
    std::string reference_hash() const;
};

/// Reads `study.*`, `variant.<name>.*` and `reference.*`; every other key is
/// the shared run config.
///   study.kind = latency
///   study.variants = [lat0, lat100]
///   study.seeds = [0, 1, 2]
///   variant.lat0.env.latency.scale = 0
StudySpec bind_study(const ConfigDoc& doc, Profile fallback);

/// Canned variant grids.
std::vector<StudyVariant> latency_grid();      ///< 0, 20, 50, 100, 150 %
std::vector<StudyVariant> ball_distribution_grid();
std::vector<StudyVariant> noise_grid();        ///< none, +-4 cm, +-8 cm, +4 cm bias
std::vector<StudyVariant> physical_params_grid();

struct SeedOutcome {
    std::string variant;
    std::uint64_t seed = 0;
    bool solved = false;
    int iterations = 0;
    std::optional<int> solve_iteration;
    std::vector<double> repetition_means;  ///< empty unless solved
};

struct VariantSummary {
    std::string variant;
    int seeds = 0;
    int solved = 0;
    double solve_rate = 0.0;
    std::optional<double> mean;  ///< over solved seeds' reference returns
    double ci95 = 0.0;
};

struct StudyResult {
    std::vector<SeedOutcome> outcomes;
    std::vector<VariantSummary> summary;
    std::string reference_hash;
};

struct StudyCallbacks {
    std::function<void(const std::string& variant, std::uint64_t seed, const trainer::CurveRow&)> on_iteration;
    std::function<void(const SeedOutcome&)> on_seed;
};

/// Trains every (variant, seed), keeps solved runs, and evaluates each on the
/// reference env `repetitions` x `episodes` times with the same episode seeds
/// for every variant. With `out_dir` set, per-run curves and checkpoints are
/// written under runs/<variant>/s<seed>/.
StudyResult run_study(const StudySpec& spec, int workers, const std::optional<std::filesystem::path>& out_dir = {},
                      const StudyCallbacks& callbacks = {});

std::vector<VariantSummary> summarize(const StudySpec& spec, const std::vector<SeedOutcome>& outcomes);

void write_study_evals_csv(const std::filesystem::path& path, const StudyResult& r);
void write_study_summary_csv(const std::filesystem::path& path, const StudyResult& r);
std::string study_markdown(const StudySpec& spec, const StudyResult& r);

}  // namespace ttlab::cli
