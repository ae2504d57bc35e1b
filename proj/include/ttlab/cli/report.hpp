#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ttlab::cli {

struct StageLatency {
    std::string run_id;
    std::string stage;
    std::size_t count = 0;
    double mean_ms = 0.0;
    double p50_ms = 0.0;
    double p99_ms = 0.0;
};

/// Per-stage latency percentiles from every episode log (*.jsonl) below `dir`.
std::vector<StageLatency> stage_latencies(const std::filesystem::path& dir, const std::string& run_id);

/// Nearest-rank percentile of unsorted values; q in [0, 100].
double percentile(std::vector<double> values, double q);

struct ReportResult {
    std::vector<std::string> warnings;
    int runs = 0;
    int studies = 0;
    int evals = 0;
};

/// Collects every directory (each given one and its immediate children) that
/// holds a manifest and writes report.md, curves.csv, study_tables.csv and
/// latency_stages.csv into `out_dir`. Directories without a manifest are
/// skipped with a warning.
ReportResult emit_report(const std::vector<std::filesystem::path>& dirs, const std::filesystem::path& out_dir);

}  // namespace ttlab::cli
