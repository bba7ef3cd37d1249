#include "spade/optimizers.hpp"

#include "fixed_source.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace spade;

namespace {

Objective sphere(std::size_t dim) {
    return {"sphere", Bounds::uniform(dim, -100, 100),
            [](std::span<const double> x) {
                double s = 0;
                for (double v : x) s += v * v;
                return s;
            },
            0.0};
}

Objective rastrigin(std::size_t dim) {
    return {"rastrigin", Bounds::uniform(dim, -5.12, 5.12),
            [](std::span<const double> x) {
                double s = 0;
                for (double v : x) s += v * v - 10 * std::cos(2 * M_PI * v) + 10;
                return s;
            },
            0.0};
}

Particle at(Vector x, Vector v) {
    Particle p;
    p.position = std::move(x);
    p.velocity = std::move(v);
    p.pbest = p.position;
    return p;
}

const std::vector<double> wide{1e9};

}  // namespace

TEST_CASE("exploration velocity") {
    FixedSource half{{0.5}};
    CHECK(velocity_update_exploration(at({3}, {0}), std::vector<double>{3}, 0.7, 2.0, wide, half) == Vector{0});
    CHECK(velocity_update_exploration(at({0}, {1.5}), std::vector<double>{9}, 1.0, 0.0, wide, half) == Vector{1.5});
    CHECK(velocity_update_exploration(at({0}, {2}), std::vector<double>{4}, 0.5, 2.0, wide, half) == Vector{5});
    const std::vector<double> tight{3};
    CHECK(velocity_update_exploration(at({0}, {2}), std::vector<double>{4}, 0.5, 2.0, tight, half) == Vector{3});
}

TEST_CASE("exploitation velocity") {
    FixedSource one{{1.0}};
    CHECK(velocity_update_exploitation(at({1}, {0}), std::vector<double>{1}, std::vector<double>{1}, 0.5, 1, 1, wide,
                                       one) == Vector{0});
    CHECK(velocity_update_exploitation(at({0}, {0}), std::vector<double>{2}, std::vector<double>{4}, 0.5, 1, 1, wide,
                                       one) == Vector{6});

    // With c2 = 0 the update reduces to the exploration rule with c1.
    Rng a(5);
    Rng b(5);
    const Particle p = at({1, -2, 3}, {0.5, 0.1, -0.3});
    const std::vector<double> cl{2, 2, 2};
    const std::vector<double> sb{-9, 9, -9};
    const Vector with = velocity_update_exploitation(p, cl, sb, 0.8, 1.7, 0.0, wide, a);
    FixedSource replay;
    replay.uniforms.clear();
    for (int i = 0; i < 3; ++i) {
        replay.uniforms.push_back(b.uniform());
        b.uniform();  // r2, unused when c2 = 0
    }
    CHECK(with == velocity_update_exploration(p, cl, 0.8, 1.7, wide, replay));
}

TEST_CASE("baseline PSO velocity and schedule") {
    FixedSource half{{0.5}};
    Particle p = at({0}, {0});
    p.pbest = {1};
    CHECK(baseline_pso_update(p, std::vector<double>{3}, 0.0, 2.0, 2.0, wide, half) == Vector{4});
    Particle still = at({2}, {0});
    CHECK(baseline_pso_update(still, std::vector<double>{2}, 0.9, 2.0, 2.0, wide, half) == Vector{0});
    CHECK(Schedule{0.9, 0.4}.at(0.5) == doctest::Approx(0.65));
    CHECK(Schedule{0.99, 0.2}.at(0.0) == 0.99);
    CHECK(Schedule{0.99, 0.2}.at(1.0) == doctest::Approx(0.2));
}

TEST_CASE("default configuration") {
    const SpadeConfig c;
    CHECK(c.population == 40);
    CHECK(c.k == 2);
    CHECK(c.v_ulk == 6);
    CHECK(c.n_exp == 5);
    CHECK(default_budget(30) == 300000);
    const Objective obj = sphere(4);
    SpadeOptimizer opt(obj, c, 1);
    opt.initialize();
    CHECK(opt.exploit_members().size() == 25);
    CHECK(opt.explore_members().size() == 15);
}

TEST_CASE("optimizer names") {
    CHECK(parse_optimizer("clpso") == OptimizerKind::clpso);
    CHECK(to_string(OptimizerKind::pso) == "pso");
    CHECK_THROWS_AS(parse_optimizer("de"), std::invalid_argument);
}

TEST_CASE("one SpadePSO step on the sphere keeps the best nonincreasing") {
    const Objective obj = sphere(5);
    SpadeConfig cfg;
    cfg.population = 8;
    cfg.budget = 800;
    SpadeOptimizer opt(obj, cfg, 3);
    opt.initialize();
    double prev = opt.gbest_fitness();
    while (opt.step()) {
        REQUIRE(opt.gbest_fitness() <= prev);
        prev = opt.gbest_fitness();
    }
    CHECK(opt.evaluations() == 800);
}

TEST_CASE("complete graph without experts selects gbest and matches the gbest-guided step") {
    const Objective obj = rastrigin(6);
    SpadeConfig cfg;
    cfg.population = 12;
    cfg.k = 12;
    cfg.v_ulk = 0;
    cfg.n_exp = 0;
    cfg.budget = 12 * 40;
    SpadeConfig gb = cfg;
    gb.guide_with_gbest = true;
    SpadeOptimizer spa(obj, cfg, 77);
    SpadeOptimizer ref(obj, gb, 77);
    spa.initialize();
    ref.initialize();
    while (true) {
        std::vector<double> pf;
        for (const auto& p : spa.particles()) pf.push_back(p.pbest_fitness);
        const auto best = static_cast<std::size_t>(std::min_element(pf.begin(), pf.end()) - pf.begin());
        const bool a = spa.step();
        const bool b = ref.step();
        REQUIRE(a == b);
        if (!a) break;
        REQUIRE(spa.last_spa().sbest == best);
        REQUIRE(spa.positions() == ref.positions());
    }
}

TEST_CASE("budget of one population gives a single trace entry") {
    const Objective obj = sphere(3);
    OptimizerConfig cfg;
    cfg.spade.budget = cfg.pso.budget = cfg.clpso.budget = 40;
    for (auto kind : {OptimizerKind::spade, OptimizerKind::pso, OptimizerKind::clpso}) {
        const RunResult r = run(kind, obj, cfg, 9);
        CHECK(r.trace.size() == 1);
        CHECK(r.evaluations == 40);
    }
    cfg.spade.budget = 39;
    CHECK_THROWS_AS(run(OptimizerKind::spade, obj, cfg, 9), std::invalid_argument);
}

TEST_CASE("runs are deterministic per seed") {
    const Objective obj = rastrigin(5);
    OptimizerConfig cfg;
    cfg.spade.budget = cfg.pso.budget = cfg.clpso.budget = 4000;
    for (auto kind : {OptimizerKind::spade, OptimizerKind::pso, OptimizerKind::clpso}) {
        const RunResult a = run(kind, obj, cfg, 123);
        const RunResult b = run(kind, obj, cfg, 123);
        const RunResult c = run(kind, obj, cfg, 124);
        CHECK(a.best_position == b.best_position);
        CHECK(a.best_fitness == b.best_fitness);
        CHECK(a.trace.size() == b.trace.size());
        CHECK(a.best_position != c.best_position);
    }
}

TEST_CASE("PSO baseline solves the sphere") {
    const Objective obj = sphere(10);
    const RunResult r = run(OptimizerKind::pso, obj, {}, 1);
    CHECK(r.error < 1e-3);
}

TEST_CASE("run invariants across optimizers and topologies (property)") {
    const Objective obj = rastrigin(4);
    for (auto topo : {TopologyVariant::distance, TopologyVariant::serial, TopologyVariant::combined})
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            SpadeConfig cfg;
            cfg.population = 10;
            cfg.budget = 1003;
            cfg.topology = topo;
            SpadeOptimizer opt(obj, cfg, seed);
            opt.initialize();
            const Vector vmax = velocity_limits(obj.bounds);
            while (opt.step()) {
                for (const auto& p : opt.particles()) {
                    REQUIRE(obj.bounds.contains(p.position));
                    for (std::size_t d = 0; d < 4; ++d) REQUIRE(std::abs(p.velocity[d]) <= vmax[d]);
                    REQUIRE(p.pbest_fitness <= p.fitness);
                }
                const auto& c = opt.last_spa().candidates;
                REQUIRE(std::find(c.begin(), c.end(), opt.last_spa().sbest) != c.end());
                REQUIRE(opt.current_degree_bound() >= cfg.k);
                REQUIRE(opt.current_degree_bound() <= cfg.k + cfg.v_ulk);
                for (std::size_t i = 0; i < 10; ++i) REQUIRE(opt.last_graph().out_degree(i) >= 1);
                if (topo == TopologyVariant::distance) REQUIRE(opt.learned_edges().edge_count() == 0);
            }
            const auto& tr = opt.trace();
            REQUIRE(opt.evaluations() == 1003);
            REQUIRE(tr.front().iteration == 0);
            for (std::size_t i = 1; i < tr.size(); ++i) REQUIRE(tr[i].best_fitness <= tr[i - 1].best_fitness);
            REQUIRE(tr.back().best_fitness == opt.gbest_fitness());
        }
}

TEST_CASE("distance and combined variants agree before any learned edge exists") {
    const Objective obj = rastrigin(4);
    SpadeConfig a;
    a.population = 10;
    a.budget = 1000;
    SpadeConfig b = a;
    b.topology = TopologyVariant::combined;
    SpadeOptimizer da(obj, a, 5);
    SpadeOptimizer db(obj, b, 5);
    da.initialize();
    db.initialize();
    da.step();
    db.step();
    CHECK(da.last_graph() == db.last_graph());
    CHECK(da.positions() == db.positions());
}

TEST_CASE("baseline traces have no sub-population diversity") {
    const Objective obj = sphere(3);
    OptimizerConfig cfg;
    cfg.pso.budget = 400;
    const RunResult r = run(OptimizerKind::pso, obj, cfg, 1);
    CHECK(std::isnan(r.trace.back().div_explore));
    CHECK(r.trace.back().sbest == -1);
    CHECK(r.trace.back().div_all >= 0.0);
}
