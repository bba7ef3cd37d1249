#include "spade/harness.hpp"
#include "spade/spa.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

namespace {

using namespace spade;

constexpr int usage_exit = 2;

void print_values(const char* label, const std::vector<Rational>& values, std::span<const std::size_t> only = {}) {
    std::printf("%-6s", label);
    if (only.empty()) {
        for (std::size_t i = 0; i < values.size(); ++i) std::printf(" %zu:%.5f", i + 1, values[i].to_double());
    } else {
        for (std::size_t k : only) std::printf(" %zu:%.5f", k + 1, values[k].to_double());
    }
    std::printf("\n");
}

int spa_demo() {
    const SpaInstance demo = demo_instance();
    const ExactSpaReport rep = run_spa<Rational>(demo.graph, demo.fitness);
    std::printf("adjacency (row i lists the particles i knows):\n");
    for (std::size_t i = 0; i < demo.graph.size(); ++i) {
        std::printf("  %zu: ", i + 1);
        for (std::size_t j = 0; j < demo.graph.size(); ++j) std::printf("%d", demo.graph(i, j) ? 1 : 0);
        std::printf("   fitness %.0f\n", demo.fitness[i]);
    }
    std::printf("J*    ");
    for (std::size_t v : rep.votes) std::printf(" %zu", v + 1);
    std::printf("\nC     ");
    for (std::size_t c : rep.candidates) std::printf(" %zu", c + 1);
    std::printf("\n");
    print_values("r_at", rep.actual_turnout, rep.candidates);
    print_values("r_kp", rep.prevalence);
    std::printf("alpha_11 = %s\n", (std::ostringstream() << rep.popularity(0, 0)).str().c_str());
    print_values("r_et", rep.expected_turnout, rep.candidates);
    std::printf("theta ");
    for (std::size_t c = 0; c < rep.candidates.size(); ++c)
        std::printf(" %zu:%.5f", rep.candidates[c] + 1, rep.theta[c].to_double());
    std::printf("\nsbest  %zu\n", rep.sbest + 1);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Surprisingly popular PSO experiments"};
    app.require_subcommand(1);

    ExperimentConfig config;
    std::string config_file;
    std::vector<std::string> overrides;
    std::vector<std::pair<std::string, std::string>> flags;
    auto* run_cmd = app.add_subcommand("run", "Run seeded repetitions and write a report");
    run_cmd->add_option("--config", config_file, "Flat key = value configuration file");
    const auto flag = [&](const char* name, const char* key, const char* help) {
        run_cmd->add_option_function<std::string>(
            name, [&flags, key](const std::string& v) { flags.emplace_back(key, v); }, help);
    };
    flag("--optimizer", "optimizer", "spade, pso or clpso");
    flag("--problem", "problems", "Comma-separated list: F1..F16, ssrp, ode, ode-params");
    flag("--dim", "dim", "Benchmark dimension: 10, 30, 50 or 100");
    flag("--runs", "runs", "Number of seeded runs");
    flag("--seed", "seed", "Base seed; run r uses seed + r");
    flag("--budget", "budget", "Evaluation budget per run");
    flag("--topology", "topology", "distance, serial or combined");
    flag("--out", "out", "Output directory");
    flag("--threads", "threads", "Worker threads");
    flag("--data-dir", "data_dir", "Directory with F<id>_D<dim>.txt shift/rotation files");
    run_cmd->add_option("--set", overrides, "Extra key=value settings (repeatable)");
    bool no_traces = false;
    run_cmd->add_flag("--no-traces", no_traces, "Skip the per-run trace CSVs");

    std::string report_a;
    std::string report_b;
    auto* cmp_cmd = app.add_subcommand("compare", "Compare two reports over their problems");
    cmp_cmd->add_option("--a", report_a, "First report (report.json)")->required();
    cmp_cmd->add_option("--b", report_b, "Second report (report.json)")->required();
    std::string cmp_csv;
    cmp_cmd->add_option("--csv", cmp_csv, "Also write the table as CSV");

    auto* demo_cmd = app.add_subcommand("spa-demo", "Print the five-particle surprisingly popular decision");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : usage_exit;
    }

    try {
        if (*demo_cmd) return spa_demo();
        if (*cmp_cmd) {
            const Report a = load_report(report_a);
            const Report b = load_report(report_b);
            const ComparisonTable table = compare(a, b);
            std::cout << format_comparison(table, a.optimizer + "(A)", b.optimizer + "(B)");
            if (!cmp_csv.empty()) write_atomically(cmp_csv, comparison_csv(table));
            return 0;
        }
        if (!config_file.empty()) load_config_file(config, config_file);
        for (const auto& [k, v] : flags) apply_setting(config, k, v);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
            apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (no_traces) config.traces = false;
        validate(config);
        const Report report = run_experiment(config);
        write_report(report, config.out_dir);
        if (config.traces) emit_plot_data(report, config.out_dir / "traces");
        std::cout << summary_csv(report);
        std::cout << "report written to " << (config.out_dir / "report.json").string() << '\n';
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage_exit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
