#include "spade/harness.hpp"

#include "spade/benchmark.hpp"
#include "spade/ode.hpp"
#include "spade/ssrp.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace spade {

namespace {

constexpr const char* version_string = "spade 0.1.0";

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
        if (auto t = trim(item); !t.empty()) out.push_back(std::move(t));
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) throw UsageError("invalid value '" + value + "' for " + key);
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw UsageError("invalid value '" + value + "' for " + key + " (expected true or false)");
}

// Shortest text that reads back to the same double.
std::string number_text(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Schedule parse_schedule(const std::string& key, const std::string& value) {
    const auto parts = split(value, ':');
    if (parts.size() == 1) {
        const double v = parse_number<double>(key, parts[0]);
        return {v, v};
    }
    if (parts.size() != 2) throw UsageError("invalid schedule '" + value + "' for " + key + " (expected start:end)");
    return {parse_number<double>(key, parts[0]), parse_number<double>(key, parts[1])};
}

std::string schedule_text(const Schedule& s) {
    return number_text(s.start) + ':' + number_text(s.end);
}

std::optional<int> benchmark_id(const std::string& problem) {
    if (problem.size() < 2 || problem[0] != 'F') return std::nullopt;
    int id = 0;
    const auto* end = problem.data() + problem.size();
    const auto [ptr, ec] = std::from_chars(problem.data() + 1, end, id);
    if (ec != std::errc() || ptr != end || id < 1 || id > 16) return std::nullopt;
    return id;
}

std::vector<std::string> default_problems() {
    std::vector<std::string> out;
    for (int id = 1; id <= 16; ++id) out.push_back("F" + std::to_string(id));
    return out;
}

const std::vector<std::string>& problem_list(const ExperimentConfig& config) {
    static const std::vector<std::string> all = default_problems();
    return config.problems.empty() ? all : config.problems;
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
    return out;
}

std::string problem_key(const ProblemReport& p) { return p.problem + " (D=" + std::to_string(p.dim) + ")"; }


}  // namespace

std::vector<std::string> valid_problems() {
    auto out = default_problems();
    out.insert(out.end(), {"ssrp", "ode", "ode-params"});
    return out;
}

void apply_setting(ExperimentConfig& c, const std::string& raw_key, const std::string& raw_value) {
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    auto& sp = c.params.spade;
    auto& ps = c.params.pso;
    auto& cl = c.params.clpso;
    try {
        if (key == "optimizer") c.optimizer = parse_optimizer(value);
        else if (key == "problems" || key == "problem") c.problems = split(value, ',');
        else if (key == "dim") c.dim = parse_number<std::size_t>(key, value);
        else if (key == "runs") c.runs = parse_number<std::size_t>(key, value);
        else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "budget") {
            c.budget = parse_number<std::uint64_t>(key, value);
            sp.budget = ps.budget = cl.budget = c.budget;
        } else if (key == "data_dir") c.data_dir = value;
        else if (key == "out") c.out_dir = value;
        else if (key == "threads") c.threads = parse_number<std::size_t>(key, value);
        else if (key == "traces") c.traces = parse_bool(key, value);
        else if (key == "topology") sp.topology = parse_topology(value);
        else if (key == "population") sp.population = ps.population = cl.population = parse_number<std::size_t>(key, value);
        else if (key == "vmax_fraction") sp.vmax_fraction = ps.vmax_fraction = cl.vmax_fraction = parse_number<double>(key, value);
        else if (key == "spade.exploit_parts") sp.exploit_parts = parse_number<std::size_t>(key, value);
        else if (key == "spade.explore_parts") sp.explore_parts = parse_number<std::size_t>(key, value);
        else if (key == "spade.w") sp.w = parse_schedule(key, value);
        else if (key == "spade.c1") sp.c1 = parse_schedule(key, value);
        else if (key == "spade.c2") sp.c2 = parse_schedule(key, value);
        else if (key == "spade.c") sp.c = parse_schedule(key, value);
        else if (key == "spade.k") sp.k = parse_number<int>(key, value);
        else if (key == "spade.v_ulk") sp.v_ulk = parse_number<int>(key, value);
        else if (key == "spade.n_exp") sp.n_exp = parse_number<std::size_t>(key, value);
        else if (key == "spade.refresh_gap") sp.refresh_gap = parse_number<std::size_t>(key, value);
        else if (key == "spade.guide_with_gbest") sp.guide_with_gbest = parse_bool(key, value);
        else if (key == "spade.vote_on_pbest") sp.vote_on_pbest = parse_bool(key, value);
        else if (key == "pso.w") ps.w = parse_schedule(key, value);
        else if (key == "pso.c1") ps.c1 = parse_number<double>(key, value);
        else if (key == "pso.c2") ps.c2 = parse_number<double>(key, value);
        else if (key == "clpso.w") cl.w = parse_schedule(key, value);
        else if (key == "clpso.c") cl.c = parse_number<double>(key, value);
        else if (key == "clpso.refresh_gap") cl.refresh_gap = parse_number<std::size_t>(key, value);
        else throw UsageError("unknown setting '" + key + "'");
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

void load_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path.string());
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path.string() + ":" + std::to_string(number) + ": expected key = value");
        apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
    }
}

void validate(const ExperimentConfig& config) {
    if (config.runs < 1) throw UsageError("runs must be at least 1");
    if (config.threads < 1) throw UsageError("threads must be at least 1");
    const auto valid = valid_problems();
    bool any_benchmark = false;
    for (const auto& p : problem_list(config)) {
        if (std::find(valid.begin(), valid.end(), p) == valid.end())
            throw UsageError("unknown problem '" + p + "' (valid: " + join(valid, ", ") + ")");
        any_benchmark = any_benchmark || benchmark_id(p).has_value();
    }
    if (any_benchmark && config.dim != 10 && config.dim != 30 && config.dim != 50 && config.dim != 100)
        throw UsageError("benchmark dimension must be 10, 30, 50 or 100 (got " + std::to_string(config.dim) + ")");
}

std::string canonical_text(const ExperimentConfig& c) {
    const auto& sp = c.params.spade;
    const auto& ps = c.params.pso;
    const auto& cl = c.params.clpso;
    std::ostringstream out;
    out << "optimizer = " << to_string(c.optimizer) << '\n'
        << "problems = " << join(problem_list(c), ",") << '\n'
        << "dim = " << c.dim << '\n'
        << "runs = " << c.runs << '\n'
        << "seed = " << c.seed << '\n'
        << "budget = " << (c.budget ? std::to_string(*c.budget) : "default") << '\n'
        << "data_dir = " << (c.data_dir ? c.data_dir->string() : "") << '\n';
    switch (c.optimizer) {
        case OptimizerKind::spade:
            out << "population = " << sp.population << '\n'
                << "vmax_fraction = " << number_text(sp.vmax_fraction) << '\n'
                << "topology = " << to_string(sp.topology) << '\n'
                << "spade.exploit_parts = " << sp.exploit_parts << '\n'
                << "spade.explore_parts = " << sp.explore_parts << '\n'
                << "spade.w = " << schedule_text(sp.w) << '\n'
                << "spade.c1 = " << schedule_text(sp.c1) << '\n'
                << "spade.c2 = " << schedule_text(sp.c2) << '\n'
                << "spade.c = " << schedule_text(sp.c) << '\n'
                << "spade.k = " << sp.k << '\n'
                << "spade.v_ulk = " << sp.v_ulk << '\n'
                << "spade.n_exp = " << sp.n_exp << '\n'
                << "spade.refresh_gap = " << sp.refresh_gap << '\n'
                << "spade.guide_with_gbest = " << (sp.guide_with_gbest ? "true" : "false") << '\n'
                << "spade.vote_on_pbest = " << (sp.vote_on_pbest ? "true" : "false") << '\n';
            break;
        case OptimizerKind::pso:
            out << "population = " << ps.population << '\n'
                << "vmax_fraction = " << number_text(ps.vmax_fraction) << '\n'
                << "pso.w = " << schedule_text(ps.w) << '\n'
                << "pso.c1 = " << number_text(ps.c1) << '\n'
                << "pso.c2 = " << number_text(ps.c2) << '\n';
            break;
        case OptimizerKind::clpso:
            out << "population = " << cl.population << '\n'
                << "vmax_fraction = " << number_text(cl.vmax_fraction) << '\n'
                << "clpso.w = " << schedule_text(cl.w) << '\n'
                << "clpso.c = " << number_text(cl.c) << '\n'
                << "clpso.refresh_gap = " << cl.refresh_gap << '\n';
            break;
    }
    return out.str();
}

std::string config_hash(const ExperimentConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_text(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

Objective make_problem(const std::string& problem, const ExperimentConfig& config) {
    if (problem == "ssrp") return make_ssrp_objective();
    if (problem == "ode") return make_ode_objective();
    if (problem == "ode-params") return make_ode_params_objective();
    const auto id = benchmark_id(problem);
    if (!id) throw UsageError("unknown problem '" + problem + "' (valid: " + join(valid_problems(), ", ") + ")");
    std::optional<TransformData> data;
    if (config.data_dir) data = load_transform(*config.data_dir, *id, config.dim);
    if (!data) {
        // One instance per (base seed, function, dimension), shared by every run and optimizer.
        Rng rng = Rng(config.seed).split(static_cast<std::uint64_t>(*id) * 1000 + config.dim);
        data = random_transform(config.dim, rng);
    }
    return make_benchmark_objective(make_suite_function(*id, *data), problem);
}

Report run_experiment(const ExperimentConfig& config) {
    validate(config);
    const auto& problems = problem_list(config);
    std::vector<Objective> objectives;
    objectives.reserve(problems.size());
    for (const auto& p : problems) objectives.push_back(make_problem(p, config));

    Report report;
    report.optimizer = to_string(config.optimizer);
    report.config_text = canonical_text(config);
    report.config_hash = config_hash(config);
    report.version = version_string;
    for (std::size_t r = 0; r < config.runs; ++r) report.seeds.push_back(config.seed + r);
    for (std::size_t i = 0; i < problems.size(); ++i) {
        ProblemReport pr;
        pr.problem = problems[i];
        pr.dim = objectives[i].dimension();
        pr.runs.resize(config.runs);
        report.problems.push_back(std::move(pr));
    }

    const std::size_t jobs = problems.size() * config.runs;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t job = next++; job < jobs; job = next++) {
            const std::size_t p = job / config.runs;
            const std::size_t r = job % config.runs;
            try {
                RunResult res = run(config.optimizer, objectives[p], config.params, report.seeds[r]);
                report.problems[p].runs[r] = {res.seed, res.best_fitness, res.error, res.evaluations, std::move(res.trace)};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = jobs;
            }
        }
    };
    const std::size_t n_threads = std::min(config.threads, std::max<std::size_t>(jobs, 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    for (auto& pr : report.problems) {
        std::vector<double> errors;
        for (const auto& run : pr.runs) errors.push_back(run.error);
        pr.stats = error_stats(errors);
    }
    return report;
}

std::string report_to_json(const Report& report) {
    nlohmann::json j;
    j["optimizer"] = report.optimizer;
    j["provenance"] = {{"config", report.config_text},
                       {"config_hash", report.config_hash},
                       {"version", report.version},
                       {"seeds", report.seeds}};
    nlohmann::json problems = nlohmann::json::array();
    for (const auto& p : report.problems) {
        nlohmann::json runs = nlohmann::json::array();
        for (const auto& r : p.runs)
            runs.push_back({{"seed", r.seed}, {"best_fitness", r.best_fitness}, {"error", r.error},
                            {"evaluations", r.evaluations}});
        problems.push_back({{"problem", p.problem},
                            {"dim", p.dim},
                            {"runs", runs},
                            {"best", p.stats.best},
                            {"mean", p.stats.mean},
                            {"std", p.stats.std}});
    }
    j["problems"] = problems;
    return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
    Report report;
    try {
        const auto j = nlohmann::json::parse(text);
        report.optimizer = j.at("optimizer").get<std::string>();
        const auto& prov = j.at("provenance");
        report.config_text = prov.at("config").get<std::string>();
        report.config_hash = prov.at("config_hash").get<std::string>();
        report.version = prov.at("version").get<std::string>();
        report.seeds = prov.at("seeds").get<std::vector<std::uint64_t>>();
        for (const auto& pj : j.at("problems")) {
            ProblemReport p;
            p.problem = pj.at("problem").get<std::string>();
            p.dim = pj.at("dim").get<std::size_t>();
            for (const auto& rj : pj.at("runs"))
                p.runs.push_back({rj.at("seed").get<std::uint64_t>(), rj.at("best_fitness").get<double>(),
                                  rj.at("error").get<double>(), rj.at("evaluations").get<std::uint64_t>(), {}});
            p.stats = {pj.at("best").get<double>(), pj.at("mean").get<double>(), pj.at("std").get<double>()};
            report.problems.push_back(std::move(p));
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed report: ") + e.what());
    }
    return report;
}

Report load_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read report " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return report_from_json(text.str());
}

std::string summary_csv(const Report& report) {
    std::ostringstream out;
    out << "problem,dim,best,mean,std\n";
    for (const auto& p : report.problems)
        out << p.problem << ',' << p.dim << ',' << number_text(p.stats.best) << ',' << number_text(p.stats.mean) << ','
            << number_text(p.stats.std) << '\n';
    return out.str();
}

std::string runs_csv(const Report& report) {
    std::ostringstream out;
    out << "problem,dim,run,seed,best_fitness,error,evaluations\n";
    for (const auto& p : report.problems)
        for (std::size_t r = 0; r < p.runs.size(); ++r)
            out << p.problem << ',' << p.dim << ',' << r << ',' << p.runs[r].seed << ','
                << number_text(p.runs[r].best_fitness) << ',' << number_text(p.runs[r].error) << ','
                << p.runs[r].evaluations << '\n';
    return out.str();
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_report(const Report& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_atomically(dir / "report.json", report_to_json(report));
    write_atomically(dir / "summary.csv", summary_csv(report));
    write_atomically(dir / "runs.csv", runs_csv(report));
}

std::string trace_csv(const std::vector<TraceRecord>& trace) {
    std::ostringstream out;
    out << "iteration,evaluations,best_error,div_explore,div_exploit,div_all,sbest_index\n";
    for (const auto& t : trace)
        out << t.iteration << ',' << t.evaluations << ',' << number_text(t.best_error) << ','
            << number_text(t.div_explore) << ',' << number_text(t.div_exploit) << ',' << number_text(t.div_all) << ','
            << (t.sbest >= 0 ? std::to_string(t.sbest) : "") << '\n';
    return out.str();
}

std::vector<std::filesystem::path> emit_plot_data(const Report& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (const auto& p : report.problems)
        for (std::size_t r = 0; r < p.runs.size(); ++r) {
            const auto path = dir / (p.problem + "_D" + std::to_string(p.dim) + "_run" + std::to_string(r) + ".csv");
            write_atomically(path, trace_csv(p.runs[r].trace));
            written.push_back(path);
        }
    return written;
}

ComparisonTable compare(const Report& a, const Report& b) {
    std::map<std::string, double> means_b;
    for (const auto& p : b.problems) means_b[problem_key(p)] = p.stats.mean;
    std::set<std::string> keys_a;
    for (const auto& p : a.problems) keys_a.insert(problem_key(p));

    std::vector<std::string> only_a;
    std::vector<std::string> only_b;
    for (const auto& k : keys_a)
        if (!means_b.count(k)) only_a.push_back(k);
    for (const auto& [k, _] : means_b)
        if (!keys_a.count(k)) only_b.push_back(k);
    if (!only_a.empty() || !only_b.empty())
        throw UsageError("reports cover different problems; only in A: [" + join(only_a, ", ") + "], only in B: [" +
                         join(only_b, ", ") + "]");

    ComparisonTable table;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& p : a.problems) {
        ComparisonRow row{problem_key(p), p.stats.mean, means_b.at(problem_key(p)), '='};
        row.sign = row.mean_a < row.mean_b ? '+' : row.mean_a > row.mean_b ? '-' : '=';
        xs.push_back(row.mean_a);
        ys.push_back(row.mean_b);
        table.rows.push_back(row);
    }
    if (xs.size() >= 5) {
        table.verdict = wilcoxon_signed_rank(xs, ys);
        table.tested = true;
    } else {
        for (const auto& row : table.rows) {
            if (row.sign == '+') ++table.verdict.wins;
            else if (row.sign == '-') ++table.verdict.losses;
            else ++table.verdict.ties;
        }
    }
    return table;
}

std::string format_comparison(const ComparisonTable& table, const std::string& name_a, const std::string& name_b) {
    std::ostringstream out;
    out << std::left << std::setw(20) << "problem" << std::setw(16) << name_a << std::setw(16) << name_b << "sign\n";
    out << std::setprecision(6);
    for (const auto& row : table.rows)
        out << std::setw(20) << row.problem << std::setw(16) << row.mean_a << std::setw(16) << row.mean_b
            << (row.sign == '=' ? "≈" : std::string(1, row.sign)) << '\n';
    const auto& v = table.verdict;
    out << name_a << " vs " << name_b << ": +/-/≈ = " << v.wins << '/' << v.losses << '/' << v.ties;
    if (table.tested && v.p_value < 0.1) out << " (" << std::setprecision(3) << v.p_value << ')';
    out << '\n';
    return out.str();
}

std::string comparison_csv(const ComparisonTable& table) {
    std::ostringstream out;
    out << "problem,mean_a,mean_b,sign\n";
    for (const auto& row : table.rows)
        out << '"' << row.problem << "\"," << number_text(row.mean_a) << ',' << number_text(row.mean_b) << ','
            << (row.sign == '=' ? '~' : row.sign) << '\n';
    const auto& v = table.verdict;
    out << "# wins=" << v.wins << ",losses=" << v.losses << ",ties=" << v.ties << ",p="
        << (table.tested ? number_text(v.p_value) : "") << '\n';
    return out.str();
}

}  // namespace spade
