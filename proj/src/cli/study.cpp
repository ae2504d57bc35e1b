#include "ttlab/cli/study.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ttlab/cli/commands.hpp"
#include "ttlab/core/rng.hpp"
#include "ttlab/trainer/checkpoint.hpp"

namespace ttlab::cli {
namespace fs = std::filesystem;

namespace {

constexpr std::pair<StudyKind, const char*> kKinds[] = {
    {StudyKind::latency, "latency"},
    {StudyKind::ball_distribution, "ball_distribution"},
    {StudyKind::observation_noise, "observation_noise"},
    {StudyKind::physical_params, "physical_params"},
    {StudyKind::es_ablation, "es_ablation"},
    {StudyKind::task_space, "task_space"},
};

StudyVariant variant(std::string name, std::initializer_list<std::pair<std::string, std::string>> kv) {
    StudyVariant v;
    v.name = std::move(name);
    for (const auto& [k, val] : kv) v.overrides.set(k, parse_value(val, {"<grid " + v.name + ">", 0}));
    return v;
}

std::string fmt(double x, int digits = 4) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << x;
    return os.str();
}

}  // namespace

std::string to_string(StudyKind k) {
    for (const auto& [kind, name] : kKinds)
        if (kind == k) return name;
    return "?";
}

StudyKind study_kind_from_string(const std::string& s) {
    for (const auto& [kind, name] : kKinds)
        if (s == name) return kind;
    throw ConfigError("unknown study kind '" + s + "'");
}

std::vector<StudyVariant> latency_grid() {
    return {variant("latency_0", {{"env.latency.scale", "0"}}),
            variant("latency_20", {{"env.latency.scale", "0.2"}}),
            variant("latency_50", {{"env.latency.scale", "0.5"}}),
            variant("latency_100", {{"env.latency.scale", "1"}}),
            variant("latency_150", {{"env.latency.scale", "1.5"}})};
}

std::vector<StudyVariant> ball_distribution_grid() {
    std::vector<StudyVariant> out;
    for (const char* name : {"thrower", "medium", "wide", "tiny", "thrower2", "velocity_offset"})
        out.push_back(variant(name, {{"env.ball_distribution.preset", name}}));
    out.front().name = "baseline";
    return out;
}

std::vector<StudyVariant> noise_grid() {
    return {variant("noise_none", {{"env.noise.half_width", "0"}, {"env.noise.bias", "0"}}),
            variant("noise_4cm", {{"env.noise.half_width", "0.04"}, {"env.noise.bias", "0"}}),
            variant("noise_8cm", {{"env.noise.half_width", "0.08"}, {"env.noise.bias", "0"}}),
            variant("noise_4cm_bias", {{"env.noise.half_width", "0.04"}, {"env.noise.bias", "0.04"}})};
}

std::vector<StudyVariant> physical_params_grid() {
    return {variant("baseline", {}),
            variant("table_no_r_randomize", {{"env.randomization.table_restitution", "[0.9, 0]"}}),
            variant("ball_r_plus_2pct", {{"env.randomization.ball_restitution", "[0.918, 0]"}}),
            variant("table_r_plus_8pct", {{"env.randomization.table_restitution", "[0.972, 0.15]"}}),
            variant("measured", {{"env.randomization.table_restitution", "[0.92, 0.15]"},
                                 {"env.randomization.paddle_restitution", "[0.78, 0.15]"},
                                 {"env.randomization.paddle_mass", "[0.112, 0]"}})};
}

void StudySpec::validate() const {
    if (variants.empty()) throw ConfigError("study: variant list is empty");
    if (seeds.empty()) throw ConfigError("study: no seeds");
    if (episodes < 1) throw ConfigError("study: episodes must be at least 1");
    if (repetitions < 1) throw ConfigError("study: repetitions must be at least 1");
    for (std::size_t i = 0; i < variants.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (variants[i].name == variants[j].name)
                throw ConfigError("study: variant '" + variants[i].name + "' listed twice");
        for (const auto& [k, v] : variants[i].overrides.entries()) {
            const std::string top = k.substr(0, k.find('.'));
            if (top != "env" && top != "trainer" && top != "policy")
                throw ConfigError("variant '" + variants[i].name + "': cannot override '" + k + "'", v.where.source,
                                  v.where.line);
        }
    }
    for (const auto& [k, v] : reference.entries()) {
        if (k.rfind("env.", 0) != 0)
            throw ConfigError("reference: only env.* keys may be set, got '" + k + "'", v.where.source, v.where.line);
    }
    const env::EnvConfig ref = reference_env();
    for (const auto& v : variants) {
        const RunConfig run = variant_run(v);
        const trainer::PolicySpec train_spec = run.policy_spec();
        const trainer::PolicySpec ref_spec = trainer::EnvObjective::matching_policy(ref, run.arch);
        if (train_spec.observation_dim() != ref_spec.observation_dim() || train_spec.action_dim != ref_spec.action_dim)
            throw ConfigError("variant '" + v.name + "' trains a policy whose observation/action shape differs from the reference env");
    }
}

RunConfig StudySpec::variant_run(const StudyVariant& v) const {
    ConfigDoc doc = base;
    doc.merge(v.overrides);
    return bind_run(doc, profile);
}

env::EnvConfig StudySpec::reference_env() const {
    ConfigDoc doc = base;
    doc.merge(reference);
    return bind_run(doc, profile).env;
}

std::string StudySpec::reference_hash() const {
    ConfigDoc doc;
    for (const auto& [k, v] : base.entries())
        if (k.rfind("env.", 0) == 0 || k == "profile") doc.set(k, v);
    doc.merge(reference);
    if (!doc.has("profile")) doc.set("profile", ConfigValue::of(to_string(profile)));
    return doc.hash_hex();
}

StudySpec bind_study(const ConfigDoc& doc, Profile fallback) {
    StudySpec spec;
    spec.profile = fallback;
    Binder b(doc);
    std::string s;
    if (b.read("profile", s)) spec.profile = profile_from_string(s);
    if (!b.read("study.kind", s)) throw ConfigError("study.kind is required");
    try {
        spec.kind = study_kind_from_string(s);
    } catch (const ConfigError& e) {
        b.fail("study.kind", e.what());
    }
    b.read("study.episodes", spec.episodes);
    b.read("study.repetitions", spec.repetitions);
    b.read("study.eval_seed", spec.eval_seed);
    std::vector<double> seeds;
    if (b.read("study.seeds", seeds)) {
        spec.seeds.clear();
        for (double x : seeds) {
            if (x < 0 || x != std::floor(x)) b.fail("study.seeds", "seeds must be non-negative integers");
            spec.seeds.push_back(static_cast<std::uint64_t>(x));
        }
    }
    std::string grid;
    if (b.read("study.grid", grid)) {
        if (grid == "latency") {
            spec.variants = latency_grid();
        } else if (grid == "ball_distribution") {
            spec.variants = ball_distribution_grid();
        } else if (grid == "observation_noise") {
            spec.variants = noise_grid();
        } else if (grid == "physical_params") {
            spec.variants = physical_params_grid();
        } else {
            b.fail("study.grid", "unknown grid '" + grid + "'");
        }
    }
    std::vector<std::string> names;
    if (b.read("study.variants", names)) {
        std::vector<StudyVariant> chosen;
        for (const auto& n : names) {
            StudyVariant v;
            v.name = n;
            bool found = false;
            for (const auto& g : spec.variants) {
                if (g.name == n) {
                    v = g;
                    found = true;
                }
            }
            const ConfigDoc own = doc.subtree("variant." + n);
            if (!found && own.empty())
                b.fail("study.variants", "variant '" + n + "' is not in the grid and has no variant." + n + " overrides");
            v.overrides.merge(own);
            chosen.push_back(std::move(v));
        }
        spec.variants = std::move(chosen);
    }
    for (const auto& [k, v] : doc.entries()) {
        if (k.rfind("variant.", 0) == 0) {
            const std::string rest = k.substr(8);
            const std::string name = rest.substr(0, rest.find('.'));
            bool known = false;
            for (const auto& var : spec.variants) known = known || var.name == name;
            if (!known) throw ConfigError("override for variant '" + name + "' which is not in study.variants",
                                          v.where.source, v.where.line);
        } else if (k.rfind("reference.", 0) == 0) {
            spec.reference.set(k.substr(10), v);
        } else if (k.rfind("study.", 0) != 0) {
            spec.base.set(k, v);
        }
    }
    b.reject_unused({"study"});
    spec.validate();
    // Surface unknown base keys with their location.
    (void)bind_run(spec.base, spec.profile);
    return spec;
}

std::vector<VariantSummary> summarize(const StudySpec& spec, const std::vector<SeedOutcome>& outcomes) {
    std::vector<VariantSummary> out;
    for (const auto& v : spec.variants) {
        VariantSummary s;
        s.variant = v.name;
        std::vector<double> xs;
        for (const auto& o : outcomes) {
            if (o.variant != v.name) continue;
            ++s.seeds;
            if (!o.solved) continue;
            ++s.solved;
            xs.insert(xs.end(), o.repetition_means.begin(), o.repetition_means.end());
        }
        s.solve_rate = s.seeds ? static_cast<double>(s.solved) / s.seeds : 0.0;
        if (!xs.empty()) {
            double m = 0.0;
            for (double x : xs) m += x;
            m /= xs.size();
            double var = 0.0;
            for (double x : xs) var += (x - m) * (x - m);
            s.mean = m;
            s.ci95 = xs.size() > 1 ? 1.96 * std::sqrt(var / (xs.size() - 1) / xs.size()) : 0.0;
        }
        out.push_back(s);
    }
    return out;
}

StudyResult run_study(const StudySpec& spec, int workers, const std::optional<fs::path>& out_dir,
                      const StudyCallbacks& callbacks) {
    spec.validate();
    StudyResult result;
    result.reference_hash = spec.reference_hash();
    const env::EnvConfig reference = spec.reference_env();

    for (const auto& v : spec.variants) {
        const RunConfig run = spec.variant_run(v);
        const trainer::PolicySpec policy = run.policy_spec();
        const trainer::EnvObjective objective(run.env, policy);
        for (std::uint64_t seed : spec.seeds) {
            trainer::TrainerConfig tc = run.trainer;
            tc.seed = seed;
            tc.workers = workers;
            tc.stop_when_solved = true;

            std::optional<fs::path> run_dir;
            if (out_dir) {
                run_dir = *out_dir / "runs" / v.name / ("s" + std::to_string(seed));
                fs::create_directories(*run_dir);
            }
            trainer::TrainCallbacks cb;
            if (callbacks.on_iteration)
                cb.on_iteration = [&](const trainer::CurveRow& row, double) { callbacks.on_iteration(v.name, seed, row); };
            const trainer::TrainResult tr = trainer::train(tc, objective, nullptr, cb);

            SeedOutcome o;
            o.variant = v.name;
            o.seed = seed;
            o.iterations = tr.final.iteration;
            o.solved = tr.solve_checkpoint.has_value();
            if (o.solved) {
                o.solve_iteration = tr.solve_checkpoint->solve_iteration;
                const trainer::PolicyParams params{policy, tr.solve_checkpoint->theta};
                for (int rep = 0; rep < spec.repetitions; ++rep) {
                    const auto ev = trainer::evaluate_policy(params, tr.solve_checkpoint->norm, reference, spec.episodes,
                                                             derive_seed(spec.eval_seed, {static_cast<std::uint64_t>(rep)}),
                                                             workers);
                    o.repetition_means.push_back(ev.mean);
                }
            }
            if (run_dir) {
                std::ofstream curve(*run_dir / "curve.csv", std::ios::binary);
                curve << curve_csv(tr.curve);
                trainer::Checkpoint ck = tr.solve_checkpoint ? *tr.solve_checkpoint : tr.final;
                ck.policy = policy;
                trainer::save_checkpoint(ck, (*run_dir / "checkpoint.json").string());
            }
            if (callbacks.on_seed) callbacks.on_seed(o);
            result.outcomes.push_back(std::move(o));
        }
    }
    result.summary = summarize(spec, result.outcomes);
    return result;
}

void write_study_evals_csv(const fs::path& path, const StudyResult& r) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "variant,seed,solved,solve_iteration,iterations,repetition,mean_return,reference_hash\n";
    for (const auto& o : r.outcomes) {
        const std::string head = o.variant + "," + std::to_string(o.seed) + "," + (o.solved ? "1" : "0") + "," +
                                 (o.solve_iteration ? std::to_string(*o.solve_iteration) : "") + "," +
                                 std::to_string(o.iterations) + ",";
        if (o.repetition_means.empty()) {
            out << head << ",," << r.reference_hash << '\n';
        }
        for (std::size_t i = 0; i < o.repetition_means.size(); ++i)
            out << head << i << ',' << fmt(o.repetition_means[i], 6) << ',' << r.reference_hash << '\n';
    }
}

void write_study_summary_csv(const fs::path& path, const StudyResult& r) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "variant,seeds,solved,solve_rate,mean_return,ci95,reference_hash\n";
    for (const auto& s : r.summary) {
        out << s.variant << ',' << s.seeds << ',' << s.solved << ',' << fmt(s.solve_rate, 4) << ','
            << (s.mean ? fmt(*s.mean, 4) : "") << ',' << (s.mean ? fmt(s.ci95, 4) : "") << ',' << r.reference_hash
            << '\n';
    }
}

std::string study_markdown(const StudySpec& spec, const StudyResult& r) {
    std::ostringstream os;
    os << "## " << to_string(spec.kind) << " study\n\n";
    os << "Sim-to-sim transfer: each variant changes only the training environment; every policy is scored in "
          "the same reference environment (hash "
       << r.reference_hash << "), " << spec.repetitions << " x " << spec.episodes
       << " episodes, hit + land reward (max 2.0). Only solved seeds are scored.\n\n";
    os << "| variant | mean return | 95% CI | solved | solve rate |\n";
    os << "|---|---|---|---|---|\n";
    for (const auto& s : r.summary) {
        os << "| " << s.variant << " | " << (s.mean ? fmt(*s.mean, 3) : "no solved seeds") << " | "
           << (s.mean ? "+/- " + fmt(s.ci95, 3) : "-") << " | " << s.solved << "/" << s.seeds << " | "
           << fmt(100.0 * s.solve_rate, 0) << "% |\n";
    }
    return os.str();
}

}  // namespace ttlab::cli
