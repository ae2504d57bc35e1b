#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ttlab/cli/commands.hpp"
#include "ttlab/cli/config_binding.hpp"
#include "ttlab/cli/config_format.hpp"
#include "ttlab/cli/manifest.hpp"
#include "ttlab/cli/report.hpp"
#include "ttlab/cli/study.hpp"
#include "ttlab/core/errors.hpp"

using namespace ttlab;
using namespace ttlab::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("ttlab_test_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string config_error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

int run_tool(const std::string& args) {
    const char* bin = std::getenv("TTLAB_TTLAB_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "TTLAB_TTLAB_BIN is not set");
    const int status = std::system((std::string(bin) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("config format") {
    TEST_CASE("serialize and parse round trip") {
        const ConfigDoc d = parse_config(
            "profile = desk\n[env]\nrewards.terms = [hit_ball, land_ball]\nnoise.half_width = 0.04  # m\n"
            "[trainer]\nsigma = 0.0250\nmode = \"bgs\"\n",
            "t.cfg");
        CHECK(d.at("env.noise.half_width").scalar == "0.04");
        CHECK(d.at("env.rewards.terms").items == std::vector<std::string>{"hit_ball", "land_ball"});
        CHECK(d.at("trainer.sigma").where.line == 6);
        const ConfigDoc again = parse_config(d.serialize(), "again");
        CHECK(again.serialize() == d.serialize());
        CHECK(again.hash() == d.hash());
        CHECK(d.hash_hex().size() == 16);
    }

    TEST_CASE("numbers hash by value, not spelling") {
        const ConfigDoc a = parse_config("x = 0.0250\n", "a");
        const ConfigDoc b = parse_config("x = 2.5e-2\n", "b");
        CHECK(a.hash() == b.hash());
    }

    TEST_CASE("syntax errors carry file and line") {
        const std::string msg = config_error_of([] { parse_config("a = 1\n\nthis is not valid\n", "bad.cfg"); });
        CHECK(msg.find("bad.cfg:3") != std::string::npos);
        CHECK(config_error_of([] { parse_config("[env\n", "b.cfg"); }).find("b.cfg:1") != std::string::npos);
    }

    TEST_CASE("named and relative includes") {
        const fs::path dir = scratch_dir("includes");
        fs::create_directories(dir / "presets");
        write_file(dir / "presets" / "fast.cfg", "[trainer]\niterations = 3\nsigma = 0.1\n");
        write_file(dir / "local.cfg", "[trainer]\nsigma = 0.2\n");
        write_file(dir / "main.cfg", "include fast\ninclude \"local.cfg\"\n[trainer]\nseed = 4\n");
        ParseOptions po;
        po.preset_dirs = {dir / "presets"};
        const ConfigDoc d = load_config(dir / "main.cfg", po);
        CHECK(d.at("trainer.iterations").scalar == "3");
        CHECK(d.at("trainer.sigma").scalar == "0.2");
        CHECK(d.at("trainer.seed").scalar == "4");
        CHECK_THROWS_AS(load_preset("nope", po), ConfigError);

        write_file(dir / "loop.cfg", "include \"loop.cfg\"\n");
        CHECK_THROWS_AS(load_config(dir / "loop.cfg", po), ConfigError);
    }

    TEST_CASE("shipped configs and presets load") {
        const fs::path root = fs::path(TTLAB_SOURCE_DIR) / "configs";
        ParseOptions po;
        po.preset_dirs = {root / "presets"};
        for (const auto& e : fs::directory_iterator(root)) {
            if (e.path().extension() != ".cfg") continue;
            INFO(e.path().string());
            CHECK_NOTHROW(load_config(e.path(), po));
        }
        const ConfigDoc base = load_config(root / "baseline.cfg", po);
        const RunConfig rc = bind_run(base, Profile::paper);
        CHECK(rc.profile == Profile::desk);
        CHECK(rc.trainer.directions == 16);
        CHECK(rc.env.action_mode == env::ActionMode::task_position);
    }

    TEST_CASE("overrides from the command line and the environment") {
        ConfigDoc d = parse_config("[trainer]\nsigma = 0.1\n", "x");
        apply_override(d, "trainer.sigma=0.3", "--set");
        CHECK(d.at("trainer.sigma").scalar == "0.3");
        CHECK(d.at("trainer.sigma").where.source == "--set");
        std::string a = "TTLAB__trainer__seed=9", b = "HOME=/root", c = "TTLAB__env__noise__bias=[0.01, 0, 0]";
        char* block[] = {a.data(), b.data(), c.data(), nullptr};
        apply_env_overrides(d, block);
        CHECK(d.at("trainer.seed").scalar == "9");
        CHECK(d.at("env.noise.bias").items.size() == 3);
        CHECK_FALSE(d.has("HOME"));
        CHECK_THROWS_AS(apply_override(d, "no_equals_sign", "--set"), ConfigError);
    }
}

TEST_SUITE("config binding") {
    TEST_CASE("unknown keys are rejected with their location") {
        const ConfigDoc d = parse_config("profile = desk\n[env]\nlatency.scale = 1\nlatencyy = 2\n", "typo.cfg");
        const std::string msg = config_error_of([&] { bind_run(d, Profile::desk); });
        CHECK(msg.find("typo.cfg:4") != std::string::npos);
        CHECK(msg.find("env.latencyy") != std::string::npos);
    }

    TEST_CASE("type and range errors") {
        CHECK(config_error_of([] { bind_run(parse_config("[trainer]\ndirections = many\n", "t.cfg"), Profile::desk); })
                  .find("t.cfg:2") != std::string::npos);
        CHECK_THROWS_AS(bind_run(parse_config("[trainer]\nsigma = -1\n", "t.cfg"), Profile::desk), ConfigError);
        CHECK_THROWS_AS(bind_run(parse_config("[env.rewards]\nterms = [warp]\n", "t.cfg"), Profile::desk), ConfigError);
        CHECK_THROWS_AS(bind_run(parse_config("profile = lab\n", "t.cfg"), Profile::desk), ConfigError);
    }

    TEST_CASE("profiles") {
        const RunConfig desk = bind_run(ConfigDoc{}, Profile::desk);
        CHECK(desk.trainer.directions == 16);
        CHECK(desk.env.rewards.terms.size() == 4);
        const RunConfig paper = bind_run(ConfigDoc{}, Profile::paper);
        CHECK(paper.trainer.directions == 200);
        CHECK(paper.env.action_mode == env::ActionMode::joint_velocity);
        CHECK(paper.policy_spec().observation_dim() == 88);
    }
}

TEST_SUITE("studies") {
    TEST_CASE("grid variants carry their overrides") {
        const StudySpec s = bind_study(
            parse_config("[study]\nkind = observation_noise\ngrid = observation_noise\nvariants = [noise_8cm]\n", "s.cfg"),
            Profile::desk);
        REQUIRE(s.variants.size() == 1);
        CHECK(s.variants[0].overrides.at("env.noise.half_width").scalar == "0.08");
    }

    TEST_CASE("a listed variant with nothing behind it is an error") {
        const std::string msg = config_error_of([] {
            bind_study(parse_config("[study]\nkind = observation_noise\nvariants = [noise_8cm]\n", "s.cfg"), Profile::desk);
        });
        CHECK(msg.find("s.cfg:3") != std::string::npos);
        CHECK(msg.find("noise_8cm") != std::string::npos);
        CHECK_NOTHROW(bind_study(parse_config("[study]\nkind = observation_noise\nvariants = [wide]\n"
                                              "[variant.wide.env.noise]\nhalf_width = 0.1\n",
                                              "s.cfg"),
                                 Profile::desk));
    }
}

TEST_SUITE("artifacts") {
    TEST_CASE("manifest round trip") {
        RunManifest m;
        m.kind = "train";
        m.run_id = make_run_id("train", "0123456789abcdef", 3);
        m.config_hash = "0123456789abcdef";
        m.start_time = utc_timestamp();
        m.command = {"ttlab", "train", "--config", "a b.cfg"};
        m.seeds = {3};
        m.profile = "desk";
        m.config = "a = 1\n";
        const RunManifest r = manifest_from_json(manifest_to_json(m));
        CHECK(r.run_id == m.run_id);
        CHECK(r.command == m.command);
        CHECK(r.seeds == m.seeds);
        CHECK(r.config == m.config);
        CHECK(manifest_to_json(r) == manifest_to_json(m));
        const fs::path dir = scratch_dir("manifest");
        CHECK_THROWS_AS(read_manifest(dir), Error);
        write_manifest(dir, m);
        CHECK(read_manifest(dir).start_time == m.start_time);
    }

    TEST_CASE("curve csv") {
        trainer::CurveRow a{1, 0.5, 0.25, std::nullopt};
        trainer::CurveRow b{2, 0.1, 1.0 / 3.0, 1.5};
        const std::string csv = curve_csv({a, b});
        CHECK(csv.rfind(curve_csv_header(), 0) == 0);
        CHECK(curve_csv_row(a).find(",,") == std::string::npos);
        std::istringstream in(csv);
        std::string line;
        int n = 0;
        while (std::getline(in, line)) ++n;
        CHECK(n == 3);
    }

    TEST_CASE("percentiles use the nearest rank") {
        CHECK(percentile({5, 1, 4, 2, 3}, 50) == 3.0);
        CHECK(percentile({5, 1, 4, 2, 3}, 99) == 5.0);
        CHECK(percentile({7}, 1) == 7.0);
        CHECK_THROWS_AS(percentile({}, 50), InvalidArgument);
    }

    TEST_CASE("report over directories without runs") {
        const fs::path empty = scratch_dir("report_in");
        fs::create_directories(empty / "junk");
        const fs::path out = scratch_dir("report_out");
        const ReportResult r = emit_report({empty, empty / "missing"}, out);
        CHECK(r.runs == 0);
        CHECK(r.warnings.size() == 2);
        CHECK(read_file(out / "report.md").find("No runs found") != std::string::npos);
        CHECK(read_file(out / "curves.csv").rfind("run_id,iteration", 0) == 0);
    }
}

TEST_SUITE("command line") {
    TEST_CASE("exit codes") {
        const fs::path dir = scratch_dir("exit");
        write_file(dir / "bad.cfg", "[trainer]\ndirectionz = 3\n");
        CHECK(run_tool("") == kExitConfig);
        CHECK(run_tool("frobnicate") == kExitConfig);
        CHECK(run_tool("train --config " + (dir / "bad.cfg").string() + " --out " + (dir / "r").string()) ==
              kExitConfig);
        CHECK(run_tool("eval " + (dir / "nothing.json").string()) == kExitRuntime);
    }

    TEST_CASE("a short training run produces its artifacts and can be evaluated") {
        const fs::path dir = scratch_dir("train");
        const std::string run = (dir / "run").string();
        REQUIRE(run_tool("train --profile desk --iterations 2 --episodes 2 --seed 1 --set trainer.directions=4 "
                         "--set trainer.elites=2 --set trainer.repeats=1 --set trainer.eval_every=0 --out " +
                         run) == kExitOk);
        for (const char* f : {"manifest.json", "config.cfg", "curve.csv", "timing.csv", "final_eval.csv"})
            CHECK(fs::exists(fs::path(run) / f));
        const RunManifest m = read_manifest(run);
        CHECK(m.kind == "train");
        CHECK(m.seeds == std::vector<std::uint64_t>{1});
        CHECK(run_tool("eval " + run + " --episodes 2") == kExitOk);
        CHECK(run_tool("report " + run + " --out " + (dir / "report").string()) == kExitOk);
        CHECK(read_file(dir / "report" / "report.md").find(m.run_id) != std::string::npos);
    }
}
