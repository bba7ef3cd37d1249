#include "spade/optimizers.hpp"

#include "spade/stats.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace spade {

std::string to_string(OptimizerKind k) {
    switch (k) {
        case OptimizerKind::spade: return "spade";
        case OptimizerKind::pso: return "pso";
        case OptimizerKind::clpso: return "clpso";
    }
    return "?";
}

OptimizerKind parse_optimizer(const std::string& name) {
    if (name == "spade") return OptimizerKind::spade;
    if (name == "pso") return OptimizerKind::pso;
    if (name == "clpso") return OptimizerKind::clpso;
    throw std::invalid_argument("unknown optimizer '" + name + "' (valid: spade, pso, clpso)");
}

std::uint64_t default_budget(std::size_t dimension) { return static_cast<std::uint64_t>(dimension) * 10000; }

namespace {

std::uint64_t checked_budget(const std::optional<std::uint64_t>& requested, const Objective& obj,
                             std::size_t population) {
    const std::uint64_t budget = requested.value_or(default_budget(obj.dimension()));
    if (budget < population)
        throw std::invalid_argument("budget " + std::to_string(budget) + " is smaller than the population " +
                                    std::to_string(population));
    return budget;
}

void move(Particle& p, Vector velocity, const Bounds& bounds) {
    p.velocity = std::move(velocity);
    for (std::size_t d = 0; d < p.position.size(); ++d) p.position[d] += p.velocity[d];
    clip_particle(p, bounds);
}

// Index of the particle with the lowest pbest fitness (first on ties).
std::size_t best_pbest(const std::vector<Particle>& swarm) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < swarm.size(); ++i)
        if (swarm[i].pbest_fitness < swarm[best].pbest_fitness) best = i;
    return best;
}

std::vector<Vector> collect_positions(const std::vector<Particle>& swarm) {
    std::vector<Vector> out;
    out.reserve(swarm.size());
    for (const auto& p : swarm) out.push_back(p.position);
    return out;
}

std::vector<Vector> collect_pbests(const std::vector<Particle>& swarm) {
    std::vector<Vector> out;
    out.reserve(swarm.size());
    for (const auto& p : swarm) out.push_back(p.pbest);
    return out;
}

std::vector<double> collect_pbest_fitness(const std::vector<Particle>& swarm) {
    std::vector<double> out;
    out.reserve(swarm.size());
    for (const auto& p : swarm) out.push_back(p.pbest_fitness);
    return out;
}

RunResult finish(const Objective& obj, std::uint64_t seed, const Vector& gbest, double gbest_fitness,
                 std::uint64_t evaluations, std::vector<TraceRecord> trace) {
    RunResult r;
    r.seed = seed;
    r.best_position = gbest;
    r.best_fitness = gbest_fitness;
    r.error = obj.error(gbest_fitness);
    r.evaluations = evaluations;
    r.trace = std::move(trace);
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// SpadePSO

SpadeOptimizer::SpadeOptimizer(const Objective& objective, SpadeConfig config, std::uint64_t seed)
    : objective_(objective),
      config_(std::move(config)),
      rng_(seed),
      budget_(checked_budget(config_.budget, objective, config_.population)),
      v_max_(velocity_limits(objective.bounds, config_.vmax_fraction)) {
    const std::size_t n = config_.population;
    if (n < 4) throw std::invalid_argument("SpadePSO needs a population of at least 4");
    const std::size_t parts = config_.exploit_parts + config_.explore_parts;
    if (config_.exploit_parts == 0 || config_.explore_parts == 0)
        throw std::invalid_argument("SpadePSO needs both sub-populations");
    const std::size_t n_exploit = std::clamp<std::size_t>((n * config_.exploit_parts + parts / 2) / parts, 1, n - 1);
    if (config_.k < 1) throw std::invalid_argument("SpadePSO: initial out-degree k must be >= 1");
    if (config_.v_ulk < 0) throw std::invalid_argument("SpadePSO: degree growth speed must be >= 0");
    if (config_.n_exp > n) throw std::invalid_argument("SpadePSO: more experts than particles");
    is_explorer_.assign(n, false);
    eta_.assign(n, 0.0);
    everyone_.resize(n);
    std::iota(everyone_.begin(), everyone_.end(), std::size_t{0});
    for (std::size_t i = 0; i < n_exploit; ++i) {
        exploit_.push_back(i);
        eta_[i] = learning_probability(i + 1, n_exploit);
    }
    for (std::size_t i = n_exploit; i < n; ++i) {
        explore_.push_back(i);
        is_explorer_[i] = true;
        eta_[i] = learning_probability(i - n_exploit + 1, n - n_exploit);
    }
}

std::vector<Vector> SpadeOptimizer::positions() const { return collect_positions(swarm_); }
std::vector<Vector> SpadeOptimizer::pbests() const { return collect_pbests(swarm_); }
std::vector<double> SpadeOptimizer::pbest_fitness() const { return collect_pbest_fitness(swarm_); }

std::vector<double> SpadeOptimizer::fitness() const {
    std::vector<double> f;
    f.reserve(swarm_.size());
    for (const auto& p : swarm_) f.push_back(p.fitness);
    return f;
}

void SpadeOptimizer::rebuild_exemplar(std::size_t i, std::span<const Vector> pbests,
                                      std::span<const double> pbest_fitness) {
    const std::span<const std::size_t> scope = is_explorer_[i] ? explore_ : everyone_;
    exemplars_[i] = build_exemplar(i, pbests, pbest_fitness, eta_[i], scope, rng_);
}

void SpadeOptimizer::update_gbest() {
    const std::size_t b = best_pbest(swarm_);
    if (swarm_[b].pbest_fitness < gbest_fitness_ || gbest_.empty()) {
        gbest_ = swarm_[b].pbest;
        gbest_fitness_ = swarm_[b].pbest_fitness;
    }
}

void SpadeOptimizer::record() {
    const auto pos = positions();
    TraceRecord r;
    r.iteration = iteration_;
    r.evaluations = evaluations_;
    r.best_fitness = gbest_fitness_;
    r.best_error = objective_.error(gbest_fitness_);
    r.div_explore = diversity(pos, explore_);
    r.div_exploit = diversity(pos, exploit_);
    r.div_all = diversity(pos);
    r.sbest = iteration_ == 0 ? -1 : static_cast<long>(last_spa_.sbest);
    trace_.push_back(r);
}

void SpadeOptimizer::initialize() {
    const std::size_t n = config_.population;
    swarm_.clear();
    trace_.clear();
    evaluations_ = 0;
    iteration_ = 0;
    gbest_.clear();
    gbest_fitness_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) swarm_.push_back(random_particle(objective_.bounds, v_max_, rng_));
    for (auto& p : swarm_) {
        evaluate_and_update_pbest(p, objective_);
        ++evaluations_;
    }
    update_gbest();
    learned_ = AdjacencyMatrix(n);
    exemplars_.assign(n, {});
    const auto pb = pbests();
    const auto pf = pbest_fitness();
    for (std::size_t i = 0; i < n; ++i) rebuild_exemplar(i, pb, pf);
    u_lk_ = config_.k;
    record();
}

bool SpadeOptimizer::step() {
    if (swarm_.empty()) throw std::logic_error("SpadeOptimizer::step before initialize");
    if (evaluations_ >= budget_) return false;
    const std::size_t n = swarm_.size();
    const double frac = static_cast<double>(evaluations_) / static_cast<double>(budget_);

    // Topology for this iteration.
    const long T = static_cast<long>(budget_ / n);
    const long t = static_cast<long>(evaluations_ / n);
    u_lk_ = std::clamp(degree_bound(config_.k, config_.v_ulk, std::min(t, T), T), 1, static_cast<int>(n));
    const auto pos = positions();
    const auto fit = config_.vote_on_pbest ? pbest_fitness() : fitness();
    AdjacencyMatrix base = config_.topology == TopologyVariant::serial
                               ? serial_ring_graph(n, static_cast<std::size_t>(config_.k))
                               : knn_graph(distance_matrix(pos), static_cast<std::size_t>(u_lk_));
    const auto ranks = fitness_ranks(fitness());
    const AdjacencyMatrix experts = expert_graph(ranks, config_.n_exp, rng_);
    last_graph_ = config_.topology == TopologyVariant::distance ? union_graph(base, experts)
                                                                : union_graph(base, experts, learned_);

    // Surprisingly popular exemplar.
    last_spa_ = run_spa(last_graph_, fit);
    const std::size_t sbest = last_spa_.sbest;
    const Vector guide = config_.guide_with_gbest ? gbest_
                         : config_.vote_on_pbest  ? swarm_[sbest].pbest
                                                  : swarm_[sbest].position;

    {
        const auto pb = pbests();
        for (auto& e : exemplars_) materialize(e, pb);
    }
    const double w = config_.w.at(frac);
    const double c = config_.c.at(frac);
    const double c1 = config_.c1.at(frac);
    const double c2 = config_.c2.at(frac);

    std::vector<bool> improved(n, false);
    std::size_t moved = 0;
    for (std::size_t i = 0; i < n && evaluations_ < budget_; ++i, ++moved) {
        Particle& p = swarm_[i];
        const Vector& cl = exemplars_[i].exemplar;
        Vector v = is_explorer_[i] ? velocity_update_exploration(p, cl, w, c, v_max_, rng_)
                                   : velocity_update_exploitation(p, cl, guide, w, c1, c2, v_max_, rng_);
        move(p, std::move(v), objective_.bounds);
        const double before = p.fitness;
        evaluate_and_update_pbest(p, objective_);
        ++evaluations_;
        improved[i] = p.fitness < before;
    }

    const auto pb = pbests();
    const auto pf = pbest_fitness();
    for (std::size_t i = 0; i < moved; ++i) {
        if (maybe_refresh(swarm_[i].refresh_gap_counter, config_.refresh_gap)) {
            rebuild_exemplar(i, pb, pf);
            swarm_[i].refresh_gap_counter = 0;
        }
    }

    if (config_.topology != TopologyVariant::distance)
        for (std::size_t i = 0; i < moved; ++i)
            record_learned_edge(i, sbest, improved[i] && last_spa_.votes[i] == sbest, learned_);

    update_gbest();
    ++iteration_;
    record();
    return true;
}

RunResult SpadeOptimizer::run() {
    initialize();
    while (step()) {
    }
    return finish(objective_, rng_.seed(), gbest_, gbest_fitness_, evaluations_, trace_);
}

// ---------------------------------------------------------------------------
// PSO

PsoOptimizer::PsoOptimizer(const Objective& objective, PsoConfig config, std::uint64_t seed)
    : objective_(objective),
      config_(std::move(config)),
      rng_(seed),
      budget_(checked_budget(config_.budget, objective, config_.population)),
      v_max_(velocity_limits(objective.bounds, config_.vmax_fraction)) {
    if (config_.population < 1) throw std::invalid_argument("PSO needs a nonempty population");
}

void PsoOptimizer::record() {
    TraceRecord r;
    r.iteration = iteration_;
    r.evaluations = evaluations_;
    r.best_fitness = gbest_fitness_;
    r.best_error = objective_.error(gbest_fitness_);
    r.div_all = diversity(collect_positions(swarm_));
    trace_.push_back(r);
}

void PsoOptimizer::initialize() {
    swarm_.clear();
    trace_.clear();
    evaluations_ = 0;
    iteration_ = 0;
    for (std::size_t i = 0; i < config_.population; ++i)
        swarm_.push_back(random_particle(objective_.bounds, v_max_, rng_));
    for (auto& p : swarm_) {
        evaluate_and_update_pbest(p, objective_);
        ++evaluations_;
    }
    const std::size_t b = best_pbest(swarm_);
    gbest_ = swarm_[b].pbest;
    gbest_fitness_ = swarm_[b].pbest_fitness;
    record();
}

bool PsoOptimizer::step() {
    if (swarm_.empty()) throw std::logic_error("PsoOptimizer::step before initialize");
    if (evaluations_ >= budget_) return false;
    const double w = config_.w.at(static_cast<double>(evaluations_) / static_cast<double>(budget_));
    for (std::size_t i = 0; i < swarm_.size() && evaluations_ < budget_; ++i) {
        Particle& p = swarm_[i];
        move(p, baseline_pso_update(p, gbest_, w, config_.c1, config_.c2, v_max_, rng_), objective_.bounds);
        evaluate_and_update_pbest(p, objective_);
        ++evaluations_;
    }
    const std::size_t b = best_pbest(swarm_);
    if (swarm_[b].pbest_fitness < gbest_fitness_) {
        gbest_ = swarm_[b].pbest;
        gbest_fitness_ = swarm_[b].pbest_fitness;
    }
    ++iteration_;
    record();
    return true;
}

RunResult PsoOptimizer::run() {
    initialize();
    while (step()) {
    }
    return finish(objective_, rng_.seed(), gbest_, gbest_fitness_, evaluations_, trace_);
}

// ---------------------------------------------------------------------------
// CLPSO

ClpsoOptimizer::ClpsoOptimizer(const Objective& objective, ClpsoConfig config, std::uint64_t seed)
    : objective_(objective),
      config_(std::move(config)),
      rng_(seed),
      budget_(checked_budget(config_.budget, objective, config_.population)),
      v_max_(velocity_limits(objective.bounds, config_.vmax_fraction)) {
    const std::size_t n = config_.population;
    if (n < 2) throw std::invalid_argument("CLPSO needs a population of at least 2");
    everyone_.resize(n);
    std::iota(everyone_.begin(), everyone_.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) eta_.push_back(learning_probability(i + 1, n));
}

void ClpsoOptimizer::rebuild_exemplar(std::size_t i, std::span<const Vector> pbests,
                                      std::span<const double> pbest_fitness) {
    exemplars_[i] = build_exemplar(i, pbests, pbest_fitness, eta_[i], everyone_, rng_);
}

void ClpsoOptimizer::record() {
    TraceRecord r;
    r.iteration = iteration_;
    r.evaluations = evaluations_;
    r.best_fitness = gbest_fitness_;
    r.best_error = objective_.error(gbest_fitness_);
    r.div_all = diversity(collect_positions(swarm_));
    trace_.push_back(r);
}

void ClpsoOptimizer::initialize() {
    const std::size_t n = config_.population;
    swarm_.clear();
    trace_.clear();
    evaluations_ = 0;
    iteration_ = 0;
    for (std::size_t i = 0; i < n; ++i) swarm_.push_back(random_particle(objective_.bounds, v_max_, rng_));
    for (auto& p : swarm_) {
        evaluate_and_update_pbest(p, objective_);
        ++evaluations_;
    }
    const std::size_t b = best_pbest(swarm_);
    gbest_ = swarm_[b].pbest;
    gbest_fitness_ = swarm_[b].pbest_fitness;
    exemplars_.assign(n, {});
    const auto pb = collect_pbests(swarm_);
    const auto pf = collect_pbest_fitness(swarm_);
    for (std::size_t i = 0; i < n; ++i) rebuild_exemplar(i, pb, pf);
    record();
}

bool ClpsoOptimizer::step() {
    if (swarm_.empty()) throw std::logic_error("ClpsoOptimizer::step before initialize");
    if (evaluations_ >= budget_) return false;
    const double w = config_.w.at(static_cast<double>(evaluations_) / static_cast<double>(budget_));
    {
        const auto pb = collect_pbests(swarm_);
        for (auto& e : exemplars_) materialize(e, pb);
    }
    std::size_t moved = 0;
    for (std::size_t i = 0; i < swarm_.size() && evaluations_ < budget_; ++i, ++moved) {
        Particle& p = swarm_[i];
        move(p, velocity_update_exploration(p, exemplars_[i].exemplar, w, config_.c, v_max_, rng_),
             objective_.bounds);
        evaluate_and_update_pbest(p, objective_);
        ++evaluations_;
    }
    const auto pb = collect_pbests(swarm_);
    const auto pf = collect_pbest_fitness(swarm_);
    for (std::size_t i = 0; i < moved; ++i) {
        if (maybe_refresh(swarm_[i].refresh_gap_counter, config_.refresh_gap)) {
            rebuild_exemplar(i, pb, pf);
            swarm_[i].refresh_gap_counter = 0;
        }
    }
    const std::size_t b = best_pbest(swarm_);
    if (swarm_[b].pbest_fitness < gbest_fitness_) {
        gbest_ = swarm_[b].pbest;
        gbest_fitness_ = swarm_[b].pbest_fitness;
    }
    ++iteration_;
    record();
    return true;
}

RunResult ClpsoOptimizer::run() {
    initialize();
    while (step()) {
    }
    return finish(objective_, rng_.seed(), gbest_, gbest_fitness_, evaluations_, trace_);
}

RunResult run(OptimizerKind kind, const Objective& objective, const OptimizerConfig& config, std::uint64_t seed) {
    switch (kind) {
        case OptimizerKind::spade: return SpadeOptimizer(objective, config.spade, seed).run();
        case OptimizerKind::pso: return PsoOptimizer(objective, config.pso, seed).run();
        case OptimizerKind::clpso: return ClpsoOptimizer(objective, config.clpso, seed).run();
    }
    throw std::invalid_argument("unknown optimizer kind");
}

}  // namespace spade
