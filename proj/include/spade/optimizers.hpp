#pragma once

#include "spade/core.hpp"
#include "spade/exemplar.hpp"
#include "spade/spa.hpp"
#include "spade/topology.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spade {

/// A coefficient that moves linearly from `start` to `end` over the budget.
struct Schedule {
    double start = 0.0;
    double end = 0.0;

    /// Value at fraction `frac` in [0, 1] of the evaluation budget.
    double at(double frac) const noexcept { return start + (end - start) * frac; }
};

struct SpadeConfig {
    std::size_t population = 40;
    /// Exploitation : exploration = 5 : 3.
    std::size_t exploit_parts = 5;
    std::size_t explore_parts = 3;
    Schedule w{0.99, 0.2};
    Schedule c1{2.5, 0.5};
    Schedule c2{0.5, 2.5};
    Schedule c{3.0, 1.5};  ///< Exploration sub-population coefficient.
    int k = 2;
    int v_ulk = 6;
    std::size_t n_exp = 5;
    double vmax_fraction = 0.1;
    std::optional<std::uint64_t> budget;  ///< Defaults to D x 10000 evaluations.
    TopologyVariant topology = TopologyVariant::distance;
    std::size_t refresh_gap = 7;
    /// Steer the exploitation sub-population with gbest instead of the SPA
    /// exemplar (the classic heterogeneous CL update).
    bool guide_with_gbest = false;
    /// Vote and rank experts on personal-best fitness and steer towards the
    /// pbest of sbest. When false, current fitness and position are used.
    bool vote_on_pbest = true;
};

struct PsoConfig {
    std::size_t population = 40;
    Schedule w{0.9, 0.4};
    double c1 = 2.0;
    double c2 = 2.0;
    double vmax_fraction = 0.1;
    std::optional<std::uint64_t> budget;
};

struct ClpsoConfig {
    std::size_t population = 40;
    Schedule w{0.9, 0.4};
    double c = 2.0;
    std::size_t refresh_gap = 7;
    double vmax_fraction = 0.1;
    std::optional<std::uint64_t> budget;
};

enum class OptimizerKind { spade, pso, clpso };

std::string to_string(OptimizerKind k);
OptimizerKind parse_optimizer(const std::string& name);

/// Settings for every optimizer; `run` reads the block matching its kind.
struct OptimizerConfig {
    SpadeConfig spade;
    PsoConfig pso;
    ClpsoConfig clpso;
};

inline constexpr double not_applicable = std::numeric_limits<double>::quiet_NaN();

/// State after one iteration (iteration 0 is the initial evaluation).
struct TraceRecord {
    std::size_t iteration = 0;
    std::uint64_t evaluations = 0;
    double best_fitness = 0.0;
    double best_error = 0.0;
    double div_explore = not_applicable;  ///< NaN for single-population optimizers.
    double div_exploit = not_applicable;
    double div_all = 0.0;
    long sbest = -1;  ///< -1 when no SPA vote took place.
};

struct RunResult {
    std::uint64_t seed = 0;
    Vector best_position;
    double best_fitness = 0.0;
    double error = 0.0;
    std::uint64_t evaluations = 0;
    std::vector<TraceRecord> trace;
};

/// v = w v + c r (x_cl - x), fresh r per dimension, then clamped.
template <UniformSource R>
Vector velocity_update_exploration(const Particle& p, std::span<const double> exemplar, double w, double c,
                                   std::span<const double> v_max, R& rng) {
    Vector v(p.velocity.size());
    for (std::size_t d = 0; d < v.size(); ++d)
        v[d] = w * p.velocity[d] + c * rng.uniform() * (exemplar[d] - p.position[d]);
    return clamp_velocity(std::move(v), v_max);
}

/// v = w v + c1 r1 (x_cl - x) + c2 r2 (x_sbest - x), then clamped.
template <UniformSource R>
Vector velocity_update_exploitation(const Particle& p, std::span<const double> exemplar,
                                    std::span<const double> sbest, double w, double c1, double c2,
                                    std::span<const double> v_max, R& rng) {
    Vector v(p.velocity.size());
    for (std::size_t d = 0; d < v.size(); ++d) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        v[d] = w * p.velocity[d] + c1 * r1 * (exemplar[d] - p.position[d]) + c2 * r2 * (sbest[d] - p.position[d]);
    }
    return clamp_velocity(std::move(v), v_max);
}

/// Inertia-weight PSO: v = w v + c1 r1 (pbest - x) + c2 r2 (gbest - x), then clamped.
template <UniformSource R>
Vector baseline_pso_update(const Particle& p, std::span<const double> gbest, double w, double c1, double c2,
                           std::span<const double> v_max, R& rng) {
    Vector v(p.velocity.size());
    for (std::size_t d = 0; d < v.size(); ++d) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        v[d] = w * p.velocity[d] + c1 * r1 * (p.pbest[d] - p.position[d]) + c2 * r2 * (gbest[d] - p.position[d]);
    }
    return clamp_velocity(std::move(v), v_max);
}

/// Default evaluation budget: D x 10000.
std::uint64_t default_budget(std::size_t dimension);

/// SpadePSO: heterogeneous CL swarm whose exploitation half is steered by the
/// SPA exemplar over an adaptive Euclidean kNN + expert topology.
class SpadeOptimizer {
public:
    SpadeOptimizer(const Objective& objective, SpadeConfig config, std::uint64_t seed);

    /// Random initialization and first evaluation; records trace entry 0.
    void initialize();
    /// One iteration; returns false (doing nothing) once the budget is spent.
    bool step();
    /// initialize() followed by step() until the budget is exhausted.
    RunResult run();

    const std::vector<Particle>& particles() const noexcept { return swarm_; }
    std::vector<Vector> positions() const;
    std::vector<double> fitness() const;
    const std::vector<std::size_t>& explore_members() const noexcept { return explore_; }
    const std::vector<std::size_t>& exploit_members() const noexcept { return exploit_; }
    const AdjacencyMatrix& learned_edges() const noexcept { return learned_; }
    const AdjacencyMatrix& last_graph() const noexcept { return last_graph_; }
    const SpaReport& last_spa() const noexcept { return last_spa_; }
    const std::vector<ExemplarState>& exemplars() const noexcept { return exemplars_; }
    int current_degree_bound() const noexcept { return u_lk_; }
    std::uint64_t evaluations() const noexcept { return evaluations_; }
    std::uint64_t budget() const noexcept { return budget_; }
    std::size_t iterations() const noexcept { return iteration_; }
    const std::vector<TraceRecord>& trace() const noexcept { return trace_; }
    const Vector& gbest() const noexcept { return gbest_; }
    double gbest_fitness() const noexcept { return gbest_fitness_; }

private:
    void rebuild_exemplar(std::size_t i, std::span<const Vector> pbests, std::span<const double> pbest_fitness);
    void update_gbest();
    void record();
    std::vector<Vector> pbests() const;
    std::vector<double> pbest_fitness() const;

    const Objective& objective_;
    SpadeConfig config_;
    Rng rng_;
    std::uint64_t budget_;
    Vector v_max_;
    std::vector<Particle> swarm_;
    std::vector<std::size_t> explore_;
    std::vector<std::size_t> exploit_;
    std::vector<std::size_t> everyone_;
    std::vector<bool> is_explorer_;
    std::vector<double> eta_;
    std::vector<ExemplarState> exemplars_;
    AdjacencyMatrix learned_;
    AdjacencyMatrix last_graph_;
    SpaReport last_spa_;
    int u_lk_ = 0;
    Vector gbest_;
    double gbest_fitness_ = std::numeric_limits<double>::infinity();
    std::uint64_t evaluations_ = 0;
    std::size_t iteration_ = 0;
    std::vector<TraceRecord> trace_;
};

/// Global-best inertia-weight PSO baseline.
class PsoOptimizer {
public:
    PsoOptimizer(const Objective& objective, PsoConfig config, std::uint64_t seed);
    void initialize();
    bool step();
    RunResult run();
    const std::vector<Particle>& particles() const noexcept { return swarm_; }
    std::uint64_t evaluations() const noexcept { return evaluations_; }
    const std::vector<TraceRecord>& trace() const noexcept { return trace_; }

private:
    void record();

    const Objective& objective_;
    PsoConfig config_;
    Rng rng_;
    std::uint64_t budget_;
    Vector v_max_;
    std::vector<Particle> swarm_;
    Vector gbest_;
    double gbest_fitness_ = std::numeric_limits<double>::infinity();
    std::uint64_t evaluations_ = 0;
    std::size_t iteration_ = 0;
    std::vector<TraceRecord> trace_;
};

/// Comprehensive-learning PSO baseline over a single population.
class ClpsoOptimizer {
public:
    ClpsoOptimizer(const Objective& objective, ClpsoConfig config, std::uint64_t seed);
    void initialize();
    bool step();
    RunResult run();
    const std::vector<Particle>& particles() const noexcept { return swarm_; }
    std::uint64_t evaluations() const noexcept { return evaluations_; }
    const std::vector<TraceRecord>& trace() const noexcept { return trace_; }

private:
    void rebuild_exemplar(std::size_t i, std::span<const Vector> pbests, std::span<const double> pbest_fitness);
    void record();

    const Objective& objective_;
    ClpsoConfig config_;
    Rng rng_;
    std::uint64_t budget_;
    Vector v_max_;
    std::vector<Particle> swarm_;
    std::vector<std::size_t> everyone_;
    std::vector<double> eta_;
    std::vector<ExemplarState> exemplars_;
    Vector gbest_;
    double gbest_fitness_ = std::numeric_limits<double>::infinity();
    std::uint64_t evaluations_ = 0;
    std::size_t iteration_ = 0;
    std::vector<TraceRecord> trace_;
};

/// Run one optimizer to budget exhaustion.
RunResult run(OptimizerKind kind, const Objective& objective, const OptimizerConfig& config, std::uint64_t seed);

}  // namespace spade
