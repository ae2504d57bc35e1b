#include "ttlab/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "json.hpp"
#include "ttlab/cli/manifest.hpp"
#include "ttlab/core/errors.hpp"

namespace ttlab::cli {
namespace fs = std::filesystem;

namespace {

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::string fmt(double x, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << x;
    return os.str();
}

constexpr const char* kStages[] = {"ball_obs", "arm_obs", "gantry_obs", "arm_action", "gantry_action"};

}  // namespace

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw InvalidArgument("percentile of an empty set");
    std::sort(values.begin(), values.end());
    const double rank = std::ceil(q / 100.0 * values.size());
    const std::size_t idx = rank < 1.0 ? 0 : std::min(values.size() - 1, static_cast<std::size_t>(rank) - 1);
    return values[idx];
}

std::vector<StageLatency> stage_latencies(const fs::path& dir, const std::string& run_id) {
    std::map<std::string, std::vector<double>> samples;
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        std::ifstream in(f);
        std::string line;
        double step_start = 0.0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded()) continue;
            if (j.contains("schema")) {
                step_start = 0.0;
                continue;
            }
            if (!j.contains("stages")) continue;
            const auto& s = j["stages"];
            const double policy = s.value("policy", 0.0);
            samples["ball_obs"].push_back(1e3 * (policy - s.value("ball_observed", policy)));
            samples["arm_obs"].push_back(1e3 * (policy - s.value("arm_observed", policy)));
            samples["gantry_obs"].push_back(1e3 * (policy - s.value("gantry_observed", policy)));
            samples["arm_action"].push_back(1e3 * (s.value("arm_action_applied", step_start) - step_start));
            samples["gantry_action"].push_back(1e3 * (s.value("gantry_action_applied", step_start) - step_start));
            step_start = policy;
        }
    }
    std::vector<StageLatency> out;
    for (const char* stage : kStages) {
        const auto it = samples.find(stage);
        if (it == samples.end() || it->second.empty()) continue;
        StageLatency s;
        s.run_id = run_id;
        s.stage = stage;
        s.count = it->second.size();
        double sum = 0.0;
        for (double v : it->second) sum += v;
        s.mean_ms = sum / s.count;
        s.p50_ms = percentile(it->second, 50);
        s.p99_ms = percentile(it->second, 99);
        out.push_back(s);
    }
    return out;
}

ReportResult emit_report(const std::vector<fs::path>& dirs, const fs::path& out_dir) {
    ReportResult result;
    std::vector<fs::path> candidates;
    for (const auto& d : dirs) {
        if (!fs::is_directory(d)) {
            result.warnings.push_back("not a directory: " + d.string());
            continue;
        }
        if (fs::exists(d / kManifestFile)) {
            candidates.push_back(d);
            continue;
        }
        std::vector<fs::path> children;
        for (const auto& e : fs::directory_iterator(d))
            if (e.is_directory()) children.push_back(e.path());
        std::sort(children.begin(), children.end());
        bool any = false;
        for (const auto& c : children) {
            if (fs::exists(c / kManifestFile)) {
                candidates.push_back(c);
                any = true;
            } else {
                result.warnings.push_back("no manifest in " + c.string() + ", skipped");
            }
        }
        if (!any && children.empty()) result.warnings.push_back("no manifest in " + d.string() + ", skipped");
    }

    fs::create_directories(out_dir);
    std::ofstream md(out_dir / "report.md");
    std::ofstream curves(out_dir / "curves.csv");
    std::ofstream tables(out_dir / "study_tables.csv");
    std::ofstream stages(out_dir / "latency_stages.csv");
    if (!md || !curves || !tables || !stages) throw Error("cannot write report into " + out_dir.string());
    curves << "run_id,iteration,mean_return,elite_diff_mean,eval_return\n";
    tables << "study_id,variant,seeds,solved,solve_rate,mean_return,ci95,reference_hash\n";
    stages << "run_id,stage,count,mean_ms,p50_ms,p99_ms\n";

    md << "# Report\n\n";
    std::ostringstream runs_md, studies_md, evals_md, stages_md;
    for (const auto& dir : candidates) {
        RunManifest m;
        try {
            m = read_manifest(dir);
        } catch (const Error& e) {
            result.warnings.push_back(std::string(e.what()) + ", skipped");
            continue;
        }
        if (m.kind == "train") {
            ++result.runs;
            const auto rows = read_csv(dir / "curve.csv");
            std::optional<double> best_eval;
            int best_iter = 0;
            std::string last_mean = "-";
            for (std::size_t i = 1; i < rows.size(); ++i) {
                const auto& r = rows[i];
                if (r.size() < 4) continue;
                curves << m.run_id << ',' << r[0] << ',' << r[1] << ',' << r[2] << ',' << r[3] << '\n';
                last_mean = fmt(std::stod(r[1]), 3);
                if (!r[3].empty()) {
                    const double ev = std::stod(r[3]);
                    if (!best_eval || ev > *best_eval) {
                        best_eval = ev;
                        best_iter = std::stoi(r[0]);
                    }
                }
            }
            runs_md << "| " << m.run_id << " | " << (rows.size() > 1 ? rows.size() - 1 : 0) << " | " << last_mean
                    << " | " << (best_eval ? fmt(*best_eval, 3) + " @ " + std::to_string(best_iter) : "-") << " | "
                    << m.config_hash << " |\n";
            for (const auto& s : stage_latencies(dir, m.run_id)) {
                stages << s.run_id << ',' << s.stage << ',' << s.count << ',' << fmt(s.mean_ms, 3) << ','
                       << fmt(s.p50_ms, 3) << ',' << fmt(s.p99_ms, 3) << '\n';
                stages_md << "| " << s.run_id << " | " << s.stage << " | " << fmt(s.mean_ms, 1) << " | "
                          << fmt(s.p50_ms, 1) << " | " << fmt(s.p99_ms, 1) << " |\n";
            }
        } else if (m.kind == "study") {
            ++result.studies;
            const auto rows = read_csv(dir / "study_summary.csv");
            studies_md << "### " << m.run_id << "\n\n"
                       << "Policies trained in each variant, scored zero-shot in the fixed reference environment.\n\n"
                       << "| variant | mean return | 95% CI | solved | solve rate |\n|---|---|---|---|---|\n";
            for (std::size_t i = 1; i < rows.size(); ++i) {
                const auto& r = rows[i];
                if (r.size() < 7) continue;
                tables << m.run_id;
                for (const auto& c : r) tables << ',' << c;
                tables << '\n';
                studies_md << "| " << r[0] << " | " << (r[4].empty() ? "no solved seeds" : r[4]) << " | "
                           << (r[5].empty() ? "-" : "+/- " + r[5]) << " | " << r[2] << "/" << r[1] << " | "
                           << fmt(100.0 * std::stod(r[3]), 0) << "% |\n";
            }
            studies_md << "\n";
        } else if (m.kind == "eval") {
            ++result.evals;
            const auto rows = read_csv(dir / "eval_summary.csv");
            if (rows.size() > 1 && rows[1].size() >= 3)
                evals_md << "| " << m.run_id << " | " << rows[1][0] << " | " << rows[1][1] << " | +/- " << rows[1][2]
                         << " |\n";
        }
    }
    if (candidates.empty()) md << "No runs found.\n\n";
    if (result.runs) {
        md << "## Training runs\n\n| run | iterations | last mean return | best eval | config hash |\n"
              "|---|---|---|---|---|\n"
           << runs_md.str() << "\n";
    }
    if (!stages_md.str().empty()) {
        md << "## Pipeline stage latency (ms)\n\n| run | stage | mean | p50 | p99 |\n|---|---|---|---|---|\n"
           << stages_md.str() << "\n";
    }
    if (result.evals) {
        md << "## Evaluations\n\n| run | episodes | mean return | 95% CI |\n|---|---|---|---|\n" << evals_md.str()
           << "\n";
    }
    if (result.studies) md << "## Studies\n\n" << studies_md.str();
    if (!result.warnings.empty()) {
        md << "## Warnings\n\n";
        for (const auto& w : result.warnings) md << "- " << w << "\n";
    }
    return result;
}

}  // namespace ttlab::cli
