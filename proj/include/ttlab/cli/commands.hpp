#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ttlab/cli/config_binding.hpp"
#include "ttlab/cli/config_format.hpp"
#include "ttlab/trainer/train.hpp"

namespace ttlab::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Flags shared by the subcommands.
struct CommandOptions {
    std::optional<std::filesystem::path> config;
    std::filesystem::path out;
    int workers = 1;
    std::optional<std::uint64_t> seed;
    std::optional<int> episodes;
    std::optional<int> iterations;
    std::optional<std::string> profile;
    std::vector<std::string> overrides;  ///< key=value, applied last
    std::vector<std::string> argv;       ///< recorded in the manifest
    bool resume = false;
    bool quiet = false;
};

/// Config file, then TTLAB__ environment variables, then --set overrides and
/// the dedicated flags. `environ_block` may be null.
ConfigDoc assemble_config(const CommandOptions& opts, char** environ_block);

struct TrainOutcome {
    std::filesystem::path run_dir;
    trainer::TrainResult result;
    double final_eval = 0.0;
};
/// Writes manifest.json, config.cfg, curve.csv, timing.csv, ckpt/,
/// final_eval.csv and logs/ into opts.out.
TrainOutcome cmd_train(const CommandOptions& opts, char** environ_block, std::ostream& log);

struct EvalOutcome {
    trainer::EvalResult result;
    std::string config_hash;
};
/// Scores a checkpoint with the evaluation reward. `checkpoint` may be a
/// checkpoint file or a training run directory; in the latter case the run's
/// own config and final-eval seed are used unless overridden.
EvalOutcome cmd_eval(const std::filesystem::path& checkpoint, const CommandOptions& opts, char** environ_block,
                     std::ostream& log);

/// Runs a study config and writes study_evals.csv, study_summary.csv and study.md.
void cmd_study(const CommandOptions& opts, char** environ_block, std::ostream& log);

/// Triangulation bias for the same-side and opposite-side camera placements.
/// Writes bias.csv and bias_summary.csv; returns the worst ratio of
/// opposite-side to same-side mean bias over the sampled y positions.
double cmd_bias_study(const CommandOptions& opts, const std::vector<double>& heights, char** environ_block,
                      std::ostream& log);

/// Aggregates run and study directories into opts.out.
void cmd_report(const std::vector<std::filesystem::path>& dirs, const CommandOptions& opts, std::ostream& log);

/// Canonical text form of a training curve; identical runs give identical bytes.
std::string curve_csv(const std::vector<trainer::CurveRow>& curve);
std::string curve_csv_header();
std::string curve_csv_row(const trainer::CurveRow& row);

}  // namespace ttlab::cli
