#include "spade/topology.hpp"

#include "fixed_source.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

using namespace spade;

namespace {

// Binomial coefficient by repeated multiplication, independent of the library.
double choose(long n, long k) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (long i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

}  // namespace

TEST_CASE("distance matrix") {
    const std::vector<Vector> one{{1.0, 2.0}};
    CHECK(distance_matrix(one)(0, 0) == 0.0);

    const std::vector<Vector> two{{0, 0}, {3, 4}};
    CHECK(distance_matrix(two)(0, 1) == doctest::Approx(5.0));

    const std::vector<Vector> line{{0}, {1}, {3}};
    const DistanceMatrix d = distance_matrix(line);
    const double expect[3][3] = {{0, 1, 3}, {1, 0, 2}, {3, 2, 0}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(d(i, j) == doctest::Approx(expect[i][j]));
}

TEST_CASE("degree bound") {
    CHECK(degree_bound(2, 6, 0, 100) == 2);
    CHECK(degree_bound(2, 6, 100, 100) == 8);
    CHECK(degree_bound(2, 6, 50, 100) == 5);
    CHECK_THROWS(degree_bound(2, 6, 0, 0));
}

TEST_CASE("degree bound is monotone and bounded (property)") {
    for (int k = 1; k <= 5; ++k)
        for (int v = 0; v <= 8; ++v)
            for (long T : {1L, 7L, 100L, 2500L}) {
                int prev = degree_bound(k, v, 0, T);
                for (long t = 0; t <= T; ++t) {
                    const int u = degree_bound(k, v, t, T);
                    REQUIRE(u >= prev);
                    REQUIRE(u >= k);
                    REQUIRE(u <= k + v);
                    prev = u;
                }
            }
}

TEST_CASE("kNN graph") {
    const std::vector<Vector> line{{0}, {1}, {3}};
    const AdjacencyMatrix g = knn_graph(distance_matrix(line), 2);
    CHECK(g == AdjacencyMatrix::from_rows({"110", "110", "011"}));
    CHECK(knn_graph(distance_matrix(line), 3) == AdjacencyMatrix::complete(3));
    CHECK_THROWS(knn_graph(distance_matrix(line), 4));

    SUBCASE("ties go to the lower index") {
        const std::vector<Vector> pts{{0}, {-1}, {1}};
        const AdjacencyMatrix t = knn_graph(distance_matrix(pts), 2);
        CHECK(t(0, 1));
        CHECK_FALSE(t(0, 2));
    }
}

TEST_CASE("kNN rows have uniform out-degree but uneven in-degree (property)") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Vector> pts(8, Vector(2));
        for (auto& p : pts)
            for (auto& c : p) c = rng.uniform(-1, 1);
        for (std::size_t u = 1; u <= 8; ++u) {
            const AdjacencyMatrix g = knn_graph(distance_matrix(pts), u);
            for (std::size_t i = 0; i < 8; ++i) {
                REQUIRE(g(i, i));
                REQUIRE(g.out_degree(i) == u);
            }
        }
    }
    // A cluster plus an outlier: nobody picks the outlier at u_lk = 4.
    std::vector<Vector> pts{{0, 0}, {0.1, 0}, {0, 0.1}, {0.1, 0.1}, {0.2, 0}, {0, 0.2}, {0.2, 0.2}, {5, 5}};
    const AdjacencyMatrix g = knn_graph(distance_matrix(pts), 4);
    std::vector<std::size_t> in(8);
    for (std::size_t j = 0; j < 8; ++j) in[j] = g.in_degree(j);
    CHECK(*std::min_element(in.begin(), in.end()) != *std::max_element(in.begin(), in.end()));
}

TEST_CASE("serial ring") {
    const AdjacencyMatrix g = serial_ring_graph(5, 2);
    CHECK(g == AdjacencyMatrix::from_rows({"11100", "01110", "00111", "10011", "11001"}));
}

TEST_CASE("expert probability") {
    CHECK(expert_probability(1, 5, 2) == doctest::Approx(0.4));
    CHECK(expert_probability(5, 5, 2) == 0.0);
    CHECK(expert_probability(1, 5, 1) == doctest::Approx(0.2));
    CHECK_THROWS(expert_probability(0, 5, 2));
    CHECK_THROWS(expert_probability(6, 5, 2));
}

TEST_CASE("expert probability matches the binomial oracle and sums to one (property)") {
    for (std::size_t n = 1; n <= 40; ++n)
        for (std::size_t e = 1; e <= n; ++e) {
            double total = 0.0;
            for (std::size_t r = 1; r <= n; ++r) {
                const double p = expert_probability(r, n, e);
                REQUIRE(p == doctest::Approx(choose(long(n - r), long(e) - 1) / choose(long(n), long(e))));
                total += p;
            }
            REQUIRE(total == doctest::Approx(1.0));
        }
}

TEST_CASE("fitness ranks") {
    const std::vector<double> f{3.0, 1.0, 2.0, 1.0};
    CHECK(fitness_ranks(f) == std::vector<std::size_t>{4, 1, 3, 2});
}

TEST_CASE("expert graph") {
    const std::vector<std::size_t> ranks{3, 1, 5, 2, 4};
    FixedSource zero{{0.0}};
    FixedSource one{{1.0}};
    CHECK(expert_graph(ranks, 0, zero).edge_count() == 0);
    CHECK(expert_graph(ranks, 3, one).edge_count() == 0);

    const AdjacencyMatrix all = expert_graph(ranks, 5, zero);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(all(i, j) == (expert_probability(ranks[j], 5, 5) > 0.0));
    CHECK(all.edge_count() == 5);

    SUBCASE("support lies inside the expert set (property)") {
        Rng rng(11);
        for (int trial = 0; trial < 200; ++trial) {
            const AdjacencyMatrix b = expert_graph(ranks, 2, rng);
            for (std::size_t j = 0; j < 5; ++j)
                if (b.in_degree(j) > 0) REQUIRE(ranks[j] <= 2);
        }
    }
    SUBCASE("edge frequency follows the probability") {
        Rng rng(12);
        std::size_t hits = 0;
        const int trials = 4000;
        for (int t = 0; t < trials; ++t) hits += expert_graph(ranks, 2, rng)(0, 1);
        CHECK(static_cast<double>(hits) / trials == doctest::Approx(0.4).epsilon(0.1));
    }
}

TEST_CASE("union graph") {
    const AdjacencyMatrix a = AdjacencyMatrix::from_rows({"010", "000", "000"});
    const AdjacencyMatrix b = AdjacencyMatrix::from_rows({"000", "001", "000"});
    CHECK(union_graph(a, AdjacencyMatrix(3)) == a);
    CHECK(union_graph(a, a) == a);
    const AdjacencyMatrix u = union_graph(a, b);
    CHECK(u(0, 1));
    CHECK(u(1, 2));
    CHECK(u.edge_count() == 2);
    CHECK_THROWS_AS(union_graph(a, AdjacencyMatrix(4)), std::invalid_argument);
    CHECK(union_graph(a, b, AdjacencyMatrix::identity(3)).edge_count() == 5);
}

TEST_CASE("union soundness (property)") {
    Rng rng(21);
    for (int t = 0; t < 100; ++t) {
        AdjacencyMatrix a(6), b(6), c(6);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) {
                a.set(i, j, rng.uniform() < 0.3);
                b.set(i, j, rng.uniform() < 0.3);
                c.set(i, j, rng.uniform() < 0.3);
            }
        const AdjacencyMatrix u = union_graph(a, b, c);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) REQUIRE(u(i, j) == (a(i, j) || b(i, j) || c(i, j)));
    }
}

TEST_CASE("learned edges") {
    AdjacencyMatrix learned(4);
    record_learned_edge(1, 3, false, learned);
    CHECK(learned.edge_count() == 0);
    record_learned_edge(1, 3, true, learned);
    CHECK(learned(1, 3));
    const AdjacencyMatrix before = learned;
    record_learned_edge(1, 3, true, learned);
    CHECK(learned == before);
}

TEST_CASE("topology names and text dump") {
    CHECK(parse_topology("serial") == TopologyVariant::serial);
    CHECK(to_string(TopologyVariant::combined) == "combined");
    try {
        parse_topology("ring");
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("distance") != std::string::npos);
    }
    const AdjacencyMatrix g = AdjacencyMatrix::from_rows({"10", "11"});
    CHECK(g.to_text() == "10\n11\n");
    std::ostringstream os;
    os << g;
    CHECK(os.str() == g.to_text());
}
