#include "ttlab/cli/commands.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ttlab/cli/log_appender.hpp"
#include "ttlab/cli/manifest.hpp"
#include "ttlab/cli/report.hpp"
#include "ttlab/cli/study.hpp"
#include "ttlab/core/rng.hpp"
#include "ttlab/env/episode_log.hpp"
#include "ttlab/tracking/bias_study.hpp"

namespace ttlab::cli {
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kFinalEvalStream = 0xf1a1;
constexpr int kLoggedEpisodes = 10;
constexpr int kEpisodesPerLogFile = 5;

std::string num(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string fixed(double x, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << x;
    return os.str();
}

void set_flag(ConfigDoc& doc, const std::string& key, const std::string& value, const std::string& flag) {
    doc.set(key, ConfigValue::of(value, {flag, 0}));
}

void write_text(const fs::path& path, const std::string& text) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out || !(out << text)) throw Error("cannot write " + path.string());
    }
    fs::rename(tmp, path);
}

RunManifest base_manifest(const std::string& kind, const ConfigDoc& doc, const CommandOptions& opts,
                          std::vector<std::uint64_t> seeds, const std::string& profile) {
    RunManifest m;
    m.kind = kind;
    m.config_hash = doc.hash_hex();
    m.run_id = make_run_id(kind, m.config_hash, seeds.empty() ? 0 : seeds.front());
    m.revision = build_revision();
    m.start_time = utc_timestamp();
    m.command = opts.argv;
    m.seeds = std::move(seeds);
    m.profile = profile;
    m.config = doc.serialize();
    return m;
}

/// Adds "profile" so the hash covers it.
RunConfig bind_with_profile(ConfigDoc& doc) {
    RunConfig rc = bind_run(doc, Profile::desk);
    if (!doc.has("profile")) doc.set("profile", ConfigValue::of(to_string(rc.profile)));
    return rc;
}

/// Episodes of the final policy, written through the appender as JSON lines.
void log_episodes(const RunConfig& rc, const trainer::PolicySpec& spec, const trainer::Checkpoint& ck,
                  const fs::path& dir, std::uint64_t seed, LogAppender& appender) {
    fs::create_directories(dir);
    env::TableTennisEnv env(rc.env);
    for (int ep = 0; ep < kLoggedEpisodes; ++ep) {
        const std::uint64_t episode_seed = derive_seed(seed, {static_cast<std::uint64_t>(ep)});
        VecX obs = env.reset(episode_seed);
        env::EpisodeLog log;
        log.begin(env, episode_seed);
        VecX action;
        while (true) {
            const VecX z = ck.norm.count > 0.0 ? ck.norm.normalize(obs) : obs;
            trainer::policy_forward(spec, ck.theta, z, action);
            env::StepResult r = env.step(action);
            log.record(action, r);
            if (r.done) break;
            obs = std::move(r.observation);
        }
        std::ostringstream os;
        log.write_jsonl(os);
        char name[32];
        std::snprintf(name, sizeof name, "episodes_%03d.jsonl", ep / kEpisodesPerLogFile);
        appender.append(dir / name, os.str());
    }
}

std::string eval_outcome(double ret) {
    if (ret >= 1.5) return "returned";
    if (ret >= 0.5) return "hit";
    return "missed";
}

}  // namespace

std::string curve_csv_header() { return "iteration,mean_return,elite_diff_mean,eval_return\n"; }

std::string curve_csv_row(const trainer::CurveRow& row) {
    std::string s = std::to_string(row.iteration) + "," + num(row.mean_return) + "," + num(row.elite_diff_mean) + ",";
    if (row.eval_return) s += num(*row.eval_return);
    return s + "\n";
}

std::string curve_csv(const std::vector<trainer::CurveRow>& curve) {
    std::string s = curve_csv_header();
    for (const auto& r : curve) s += curve_csv_row(r);
    return s;
}

ConfigDoc assemble_config(const CommandOptions& opts, char** environ_block) {
    ConfigDoc doc;
    if (opts.config) {
        ParseOptions po;
        po.preset_dirs = default_preset_dirs();
        doc = load_config(*opts.config, po);
    }
    apply_env_overrides(doc, environ_block);
    for (const auto& o : opts.overrides) apply_override(doc, o, "--set");
    if (opts.profile) {
        (void)profile_from_string(*opts.profile);
        set_flag(doc, "profile", *opts.profile, "--profile");
    }
    return doc;
}

TrainOutcome cmd_train(const CommandOptions& opts, char** environ_block, std::ostream& log) {
    ConfigDoc doc = assemble_config(opts, environ_block);
    if (opts.seed) set_flag(doc, "trainer.seed", std::to_string(*opts.seed), "--seed");
    if (opts.iterations) set_flag(doc, "trainer.iterations", std::to_string(*opts.iterations), "--iterations");
    RunConfig rc = bind_with_profile(doc);
    rc.trainer.workers = opts.workers;
    rc.trainer.validate();
    const trainer::PolicySpec spec = rc.policy_spec();
    const trainer::EnvObjective objective(rc.env, spec);

    const fs::path dir = opts.out;
    const fs::path ckpt_dir = dir / "ckpt";
    std::optional<trainer::Checkpoint> resume;
    std::string curve_text = curve_csv_header();
    if (fs::exists(dir / kManifestFile)) {
        if (!opts.resume) throw Error(dir.string() + " already holds a run; pass --resume to continue it");
        const RunManifest old = read_manifest(dir);
        if (old.config_hash != doc.hash_hex())
            throw ConfigError("config hash " + doc.hash_hex() + " differs from the run's " + old.config_hash);
        if (fs::exists(ckpt_dir / "latest.json")) {
            resume = trainer::load_checkpoint((ckpt_dir / "latest.json").string());
            std::ifstream in(dir / "curve.csv");
            std::string line;
            std::getline(in, line);
            while (std::getline(in, line)) {
                if (std::stoi(line.substr(0, line.find(','))) <= resume->iteration) curve_text += line + "\n";
            }
            log << "resuming at iteration " << resume->iteration << "\n";
        }
    }
    fs::create_directories(ckpt_dir);
    write_manifest(dir, base_manifest("train", doc, opts, {rc.trainer.seed}, to_string(rc.profile)));
    write_text(dir / "config.cfg", doc.serialize());
    write_text(dir / "curve.csv", curve_text);
    if (!resume) write_text(dir / "timing.csv", "iteration,wall_ms\n");

    LogAppender appender(256);
    trainer::TrainCallbacks cb;
    cb.on_iteration = [&](const trainer::CurveRow& row, double wall_ms) {
        appender.append(dir / "curve.csv", curve_csv_row(row));
        appender.append(dir / "timing.csv", std::to_string(row.iteration) + "," + fixed(wall_ms, 3) + "\n");
        if (!opts.quiet && row.eval_return)
            log << "iteration " << row.iteration << " mean " << fixed(row.mean_return, 4) << " eval "
                << fixed(*row.eval_return, 4) << "\n";
    };
    auto save = [&](trainer::Checkpoint ck, const std::string& name) {
        ck.policy = spec;
        trainer::save_checkpoint(ck, (ckpt_dir / name).string());
    };
    cb.on_checkpoint = [&](const trainer::Checkpoint& ck) {
        appender.flush();
        save(ck, "latest.json");
        if (rc.trainer.checkpoint_every > 0 && ck.iteration % rc.trainer.checkpoint_every == 0) {
            char name[32];
            std::snprintf(name, sizeof name, "iter_%06d.json", ck.iteration);
            save(ck, name);
        }
    };
    cb.on_solved = [&](const trainer::Checkpoint& ck) {
        save(ck, "solved.json");
        if (!opts.quiet) log << "solved at iteration " << ck.iteration << "\n";
    };

    TrainOutcome out;
    out.run_dir = dir;
    out.result = trainer::train(rc.trainer, objective, resume ? &*resume : nullptr, cb);
    appender.flush();
    save(out.result.final, "final.json");

    const int episodes = opts.episodes.value_or(50);
    const std::uint64_t eval_seed = derive_seed(rc.trainer.seed, {kFinalEvalStream});
    const trainer::PolicyParams params{spec, out.result.final.theta};
    const auto ev = trainer::evaluate_policy(params, out.result.final.norm, rc.env, episodes, eval_seed, opts.workers);
    out.final_eval = ev.mean;
    write_text(dir / "final_eval.csv", "episodes,mean_return,ci95,eval_seed\n" + std::to_string(episodes) + "," +
                                           num(ev.mean) + "," + num(ev.ci95) + "," + std::to_string(eval_seed) + "\n");
    log_episodes(rc, spec, out.result.final, dir / "logs", eval_seed, appender);
    appender.flush();
    log << "final eval " << fixed(ev.mean, 4) << " +/- " << fixed(ev.ci95, 4) << " over " << episodes
        << " episodes\n";
    return out;
}

EvalOutcome cmd_eval(const fs::path& checkpoint, const CommandOptions& opts, char** environ_block, std::ostream& log) {
    fs::path ckpt_path = checkpoint;
    ConfigDoc doc;
    std::optional<std::uint64_t> run_eval_seed;
    std::optional<int> run_episodes;
    if (fs::is_directory(checkpoint)) {
        ckpt_path = checkpoint / "ckpt" / "final.json";
        if (!opts.config) {
            ParseOptions po;
            doc = load_config(checkpoint / "config.cfg", po);
            std::ifstream in(checkpoint / "final_eval.csv");
            std::string header, row;
            if (std::getline(in, header) && std::getline(in, row)) {
                std::vector<std::string> cells;
                std::stringstream ss(row);
                for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
                if (cells.size() == 4) {
                    run_episodes = std::stoi(cells[0]);
                    run_eval_seed = std::stoull(cells[3]);
                }
            }
        }
    }
    if (opts.config || !fs::is_directory(checkpoint)) {
        doc = assemble_config(opts, environ_block);
    } else {
        apply_env_overrides(doc, environ_block);
        for (const auto& o : opts.overrides) apply_override(doc, o, "--set");
        if (opts.profile) set_flag(doc, "profile", *opts.profile, "--profile");
    }
    const RunConfig rc = bind_with_profile(doc);
    const trainer::Checkpoint ck = trainer::load_checkpoint(ckpt_path.string());
    trainer::PolicySpec spec = ck.policy ? *ck.policy : rc.policy_spec();
    try {
        (void)trainer::EnvObjective(rc.env, spec);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("checkpoint does not fit the environment: ") + e.what() + " (policy " +
                          spec.observation_mode + " observations, env " +
                          (rc.env.observation_mode == env::ObservationMode::task ? "task" : "joint") + ")");
    }
    const int episodes = opts.episodes.value_or(run_episodes.value_or(50));
    const std::uint64_t seed = opts.seed.value_or(run_eval_seed.value_or(0));
    const trainer::PolicyParams params{spec, ck.theta};
    EvalOutcome out;
    out.result = trainer::evaluate_policy(params, ck.norm, rc.env, episodes, seed, opts.workers);
    out.config_hash = doc.hash_hex();

    if (!opts.out.empty()) {
        RunManifest m = base_manifest("eval", doc, opts, {seed}, to_string(rc.profile));
        write_manifest(opts.out, m);
        std::string csv = "episode,episode_seed,return,outcome\n";
        for (int i = 0; i < episodes; ++i) {
            const double r = out.result.returns[i];
            csv += std::to_string(i) + "," + std::to_string(derive_seed(seed, {static_cast<std::uint64_t>(i)})) + "," +
                   num(r) + "," + eval_outcome(r) + "\n";
        }
        write_text(opts.out / "episodes.csv", csv);
        write_text(opts.out / "eval_summary.csv", "episodes,mean_return,ci95,checkpoint,config_hash\n" +
                                                      std::to_string(episodes) + "," + num(out.result.mean) + "," +
                                                      num(out.result.ci95) + "," + ckpt_path.string() + "," +
                                                      out.config_hash + "\n");
    }
    log << "mean return " << fixed(out.result.mean, 4) << " +/- " << fixed(out.result.ci95, 4) << " (95% CI, "
        << episodes << " episodes)\n";
    return out;
}

void cmd_study(const CommandOptions& opts, char** environ_block, std::ostream& log) {
    if (!opts.config) throw ConfigError("study needs --config");
    ConfigDoc doc = assemble_config(opts, environ_block);
    if (opts.episodes) set_flag(doc, "study.episodes", std::to_string(*opts.episodes), "--episodes");
    if (opts.iterations) set_flag(doc, "trainer.iterations", std::to_string(*opts.iterations), "--iterations");
    StudySpec spec = bind_study(doc, Profile::desk);
    if (opts.seed) {
        for (std::size_t i = 0; i < spec.seeds.size(); ++i) spec.seeds[i] = *opts.seed + i;
    }
    if (!doc.has("profile")) doc.set("profile", ConfigValue::of(to_string(spec.profile)));
    write_manifest(opts.out, base_manifest("study", doc, opts, spec.seeds, to_string(spec.profile)));
    write_text(opts.out / "config.cfg", doc.serialize());

    StudyCallbacks cb;
    cb.on_seed = [&](const SeedOutcome& o) {
        log << o.variant << " seed " << o.seed << ": ";
        if (o.solved) {
            double m = 0.0;
            for (double x : o.repetition_means) m += x;
            log << "solved at " << *o.solve_iteration << ", reference return "
                << fixed(m / o.repetition_means.size(), 3) << "\n";
        } else {
            log << "not solved in " << o.iterations << " iterations\n";
        }
    };
    const StudyResult r = run_study(spec, opts.workers, opts.out, cb);
    write_study_evals_csv(opts.out / "study_evals.csv", r);
    write_study_summary_csv(opts.out / "study_summary.csv", r);
    write_text(opts.out / "study.md", study_markdown(spec, r));
    log << study_markdown(spec, r);
}

double cmd_bias_study(const CommandOptions& opts, const std::vector<double>& heights, char** environ_block,
                      std::ostream& log) {
    ConfigDoc doc = assemble_config(opts, environ_block);
    Binder b(doc);
    tracking::BiasStudyConfig cfg;
    b.read("bias.heights", cfg.heights);
    if (!heights.empty()) cfg.heights = heights;
    b.read("bias.x", cfg.x);
    b.read("bias.y_min", cfg.y_min);
    b.read("bias.y_max", cfg.y_max);
    b.read("bias.y_points", cfg.y_points);
    b.read("bias.positions", cfg.positions);
    b.read("bias.samples", cfg.samples);
    b.read("bias.jitter", cfg.jitter);
    b.read("bias.quantize", cfg.quantize);
    b.read("bias.noise_px", cfg.noise_px);
    b.read("bias.seed", cfg.seed);
    if (opts.seed) cfg.seed = *opts.seed;

    tracking::StereoPair same = tracking::same_side_pair();
    tracking::StereoPair opposite = tracking::opposite_side_pair();
    double focal = 0.0;
    const bool custom_focal = b.read("camera.focal_px", focal);
    Vec3 target(0.0, 0.0, 0.25);
    const bool custom_target = b.read("camera.target", target);
    auto place = [&](tracking::StereoPair& pair, const std::string& name) {
        Vec3 a = pair.a.center(), c = pair.b.center();
        const bool moved_a = b.read("camera." + name + ".a", a);
        const bool moved_b = b.read("camera." + name + ".b", c);
        const double f = custom_focal ? focal : pair.a.fx;
        if (moved_a || moved_b || custom_focal || custom_target) {
            pair.a = tracking::CameraModel::look_at(a, target, f);
            pair.b = tracking::CameraModel::look_at(c, target, f);
        }
    };
    place(same, "same_side");
    place(opposite, "opposite_side");
    b.reject_unused({"bias", "camera"});
    for (const auto& [k, v] : doc.entries()) {
        const std::string top = k.substr(0, k.find('.'));
        if (top != "bias" && top != "camera" && top != "profile")
            throw ConfigError("unknown key '" + k + "'", v.where.source, v.where.line);
    }
    try {
        cfg.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("bias study: ") + e.what());
    }

    const auto points = tracking::bias_study({same, opposite}, cfg);
    double worst = 0.0;
    std::ostringstream summary;
    summary << "height_m,same_side_max_bias_m,opposite_side_max_bias_m,worst_ratio\n";
    for (double h : cfg.heights) {
        double max_same = 0.0, max_opp = 0.0, ratio = 0.0;
        for (const auto& p : points) {
            if (p.height != h) continue;
            if (p.config == same.name) max_same = std::max(max_same, p.mean_bias);
            if (p.config == opposite.name) max_opp = std::max(max_opp, p.mean_bias);
        }
        for (const auto& p : points) {
            if (p.height != h || p.config != opposite.name) continue;
            for (const auto& q : points) {
                if (q.height == h && q.config == same.name && q.y == p.y && q.mean_bias > 0.0)
                    ratio = std::max(ratio, p.mean_bias / q.mean_bias);
            }
        }
        worst = std::max(worst, ratio);
        summary << num(h) << "," << num(max_same) << "," << num(max_opp) << "," << num(ratio) << "\n";
        log << "height " << h << " m: same-side max bias " << fixed(1e3 * max_same, 3) << " mm, opposite-side "
            << fixed(1e3 * max_opp, 3) << " mm, worst per-y ratio " << fixed(ratio, 3) << "\n";
    }
    if (!opts.out.empty()) {
        if (!doc.has("profile")) doc.set("profile", ConfigValue::of("desk"));
        write_manifest(opts.out, base_manifest("bias-study", doc, opts, {cfg.seed}, ""));
        std::ostringstream csv;
        tracking::write_bias_csv(csv, points);
        write_text(opts.out / "bias.csv", csv.str());
        write_text(opts.out / "bias_summary.csv", summary.str());
    }
    return worst;
}

void cmd_report(const std::vector<fs::path>& dirs, const CommandOptions& opts, std::ostream& log) {
    const ReportResult r = emit_report(dirs, opts.out);
    for (const auto& w : r.warnings) log << "warning: " << w << "\n";
    log << "report: " << r.runs << " runs, " << r.studies << " studies, " << r.evals << " evaluations -> "
        << (opts.out / "report.md").string() << "\n";
}

}  // namespace ttlab::cli
