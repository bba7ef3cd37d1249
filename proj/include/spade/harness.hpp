#pragma once

#include "spade/optimizers.hpp"
#include "spade/stats.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace spade {

/// Raised for invalid configuration or command-line input (exit code 2).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Everything needed to reproduce an experiment. An empty configuration runs
/// SpadePSO on F1..F16 at D = 30, 30 runs, default budget.
struct ExperimentConfig {
    OptimizerKind optimizer = OptimizerKind::spade;
    std::vector<std::string> problems;  ///< F1..F16, ssrp, ode, ode-params.
    std::size_t dim = 30;               ///< Benchmarks only; SSRP and ODE fix their own.
    std::size_t runs = 30;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> budget;
    std::optional<std::filesystem::path> data_dir;  ///< Shift/rotation files, when present.
    std::filesystem::path out_dir = "results";
    std::size_t threads = 1;
    bool traces = true;  ///< Emit per-run trace CSVs next to the report.
    OptimizerConfig params;
};

/// Every problem name accepted in `problems`.
std::vector<std::string> valid_problems();

/// Apply one `key = value` setting. Throws UsageError on unknown keys or bad values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Flat config file: one `key = value` per line, `#` starts a comment.
void load_config_file(ExperimentConfig& config, const std::filesystem::path& path);

/// Throws UsageError naming the problem and listing the valid choices.
void validate(const ExperimentConfig& config);

/// Canonical `key = value` text of every setting that affects results.
std::string canonical_text(const ExperimentConfig& config);

/// 64-bit FNV-1a of canonical_text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Objective for one problem. Benchmark shifts and rotations come from
/// `data_dir` when a matching file exists, else from the base seed.
Objective make_problem(const std::string& problem, const ExperimentConfig& config);

struct RunRecord {
    std::uint64_t seed = 0;
    double best_fitness = 0.0;
    double error = 0.0;
    std::uint64_t evaluations = 0;
    std::vector<TraceRecord> trace;  ///< Not serialized.
};

struct ProblemReport {
    std::string problem;
    std::size_t dim = 0;
    std::vector<RunRecord> runs;
    ErrorStats stats;
};

struct Report {
    std::string optimizer;
    std::string config_text;
    std::string config_hash;
    std::string version;
    std::vector<std::uint64_t> seeds;
    std::vector<ProblemReport> problems;
};

/// Run r of every problem uses seed + r. Jobs run on `threads` workers.
Report run_experiment(const ExperimentConfig& config);

std::string report_to_json(const Report& report);
Report report_from_json(const std::string& text);
Report load_report(const std::filesystem::path& path);

/// `summary.csv` (problem, dim, best, mean, std) and `runs.csv` (one row per run).
std::string summary_csv(const Report& report);
std::string runs_csv(const Report& report);

/// Write `path` via a temporary sibling and rename.
void write_atomically(const std::filesystem::path& path, const std::string& content);

/// report.json, summary.csv and runs.csv under `dir`.
void write_report(const Report& report, const std::filesystem::path& dir);

/// Trace CSV text of one run.
std::string trace_csv(const std::vector<TraceRecord>& trace);

/// One `<problem>_run<r>.csv` per run under `dir`; returns the files written.
std::vector<std::filesystem::path> emit_plot_data(const Report& report, const std::filesystem::path& dir);

struct ComparisonRow {
    std::string problem;
    double mean_a = 0.0;
    double mean_b = 0.0;
    char sign = '=';  ///< '+' when A's mean error is lower, '-' when higher.
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
    ComparisonVerdict verdict;
    bool tested = false;  ///< False when fewer than five problems prevent the test.
};

/// Per-problem mean errors of A against B and a Wilcoxon test over problems.
/// Throws UsageError listing the problems present in only one report.
ComparisonTable compare(const Report& a, const Report& b);

/// Human-readable table; the p-value is shown only when it is below 0.1.
std::string format_comparison(const ComparisonTable& table, const std::string& name_a, const std::string& name_b);

/// `problem,mean_a,mean_b,sign` rows followed by a `# wins,losses,ties,p` footer.
std::string comparison_csv(const ComparisonTable& table);

}  // namespace spade
