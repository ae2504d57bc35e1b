#include <iostream>

#include "CLI11.hpp"
#include "ttlab/cli/commands.hpp"

extern char** environ;

namespace {

using namespace ttlab;
using namespace ttlab::cli;

void add_common(CLI::App* cmd, CommandOptions& o, bool needs_out = true) {
    cmd->add_option("--config", o.config, "Config file")->check(CLI::ExistingFile);
    auto* out = cmd->add_option("--out", o.out, "Output directory");
    if (needs_out) out->required();
    cmd->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--profile", o.profile, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--set", o.overrides, "Override a config key (key=value), repeatable");
    cmd->add_flag("--quiet", o.quiet, "Less progress output");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Table tennis learning lab: training, evaluation and studies"};
    app.require_subcommand(1);
    CommandOptions opts;
    for (int i = 0; i < argc; ++i) opts.argv.emplace_back(argv[i]);

    auto* train = app.add_subcommand("train", "Train a policy with ES");
    add_common(train, opts);
    train->add_option("--seed", opts.seed, "Trainer seed");
    train->add_option("--iterations", opts.iterations, "Training iterations");
    train->add_option("--episodes", opts.episodes, "Episodes for the final evaluation (default 50)");
    train->add_flag("--resume", opts.resume, "Continue from the run's latest checkpoint");

    std::filesystem::path checkpoint;
    auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint or run directory");
    add_common(eval, opts, false);
    eval->add_option("checkpoint", checkpoint, "Checkpoint file or training run directory")->required();
    eval->add_option("--seed", opts.seed, "Evaluation seed");
    eval->add_option("--episodes", opts.episodes, "Episodes (default 50)");

    auto* study = app.add_subcommand("study", "Run a sim-to-sim transfer study");
    add_common(study, opts);
    study->add_option("--seed", opts.seed, "First training seed");
    study->add_option("--episodes", opts.episodes, "Episodes per reference evaluation");
    study->add_option("--iterations", opts.iterations, "Training iterations per seed");

    std::vector<double> heights;
    auto* bias = app.add_subcommand("bias-study", "Triangulation bias of two camera placements");
    add_common(bias, opts, false);
    bias->add_option("--seed", opts.seed, "Monte Carlo seed");
    bias->add_option("--height", heights, "Ball height(s) in m (default 0.25)");

    std::vector<std::filesystem::path> dirs;
    auto* report = app.add_subcommand("report", "Aggregate run and study directories");
    report->add_option("dirs", dirs, "Run or study directories")->required();
    report->add_option("--out", opts.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (train->parsed()) {
            cmd_train(opts, environ, std::cout);
        } else if (eval->parsed()) {
            cmd_eval(checkpoint, opts, environ, std::cout);
        } else if (study->parsed()) {
            cmd_study(opts, environ, std::cout);
        } else if (bias->parsed()) {
            cmd_bias_study(opts, heights, environ, std::cout);
        } else if (report->parsed()) {
            cmd_report(dirs, opts, std::cerr);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
