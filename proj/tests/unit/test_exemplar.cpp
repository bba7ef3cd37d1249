#include "spade/exemplar.hpp"

#include "fixed_source.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace spade;

namespace {

struct Pool {
    std::vector<Vector> pbests;
    std::vector<double> fitness;
};

Pool make_pool(std::size_t n, std::size_t dim) {
    Pool p;
    for (std::size_t i = 0; i < n; ++i) {
        p.pbests.emplace_back(dim, static_cast<double>(i));
        p.fitness.push_back(static_cast<double>((i * 7) % n));
    }
    return p;
}

std::vector<std::size_t> iota(std::size_t from, std::size_t to) {
    std::vector<std::size_t> v(to - from);
    std::iota(v.begin(), v.end(), from);
    return v;
}

}  // namespace

TEST_CASE("learning probability") {
    CHECK(learning_probability(1, 15) == doctest::Approx(0.05));
    CHECK(learning_probability(15, 15) == doctest::Approx(0.5));
    const double mid = 0.05 + 0.45 * (std::exp(5.0) - 1.0) / (std::exp(10.0) - 1.0);
    CHECK(learning_probability(8, 15) == doctest::Approx(mid));
    CHECK(mid == doctest::Approx(0.0530).epsilon(0.001));
    CHECK(learning_probability(1, 1) == 0.05);
    for (std::size_t i = 2; i <= 25; ++i) CHECK(learning_probability(i, 25) > learning_probability(i - 1, 25));
}

TEST_CASE("tournament") {
    const std::vector<double> fit{5, 1, 3, 0};
    const std::vector<std::size_t> scope{0, 1, 2, 3};
    // Eligible list {1, 2, 3}; the second draw skips the first, so {0, 0} pits 1 against 2.
    FixedSource src{{0.5}, {0, 0}};
    CHECK(tournament(0, scope, fit, src) == 1);
    FixedSource src2{{0.5}, {0, 1}};
    CHECK(tournament(0, scope, fit, src2) == 3);

    const std::vector<std::size_t> two{2, 3};
    Rng rng(1);
    for (int i = 0; i < 50; ++i) CHECK(tournament(3, two, fit, rng) == 2);
}

TEST_CASE("build exemplar degenerate probabilities") {
    const Pool pool = make_pool(6, 10);
    const auto scope = iota(0, 6);
    Rng rng(8);

    SUBCASE("eta = 0 borrows exactly one dimension") {
        for (int t = 0; t < 50; ++t) {
            const ExemplarState st = build_exemplar(2, pool.pbests, pool.fitness, 0.0, scope, rng);
            std::size_t foreign = 0;
            for (std::size_t d = 0; d < 10; ++d) foreign += st.sources[d] != 2;
            REQUIRE(foreign == 1);
        }
    }
    SUBCASE("eta = 1 borrows every dimension") {
        const ExemplarState st = build_exemplar(2, pool.pbests, pool.fitness, 1.0, scope, rng);
        for (std::size_t d = 0; d < 10; ++d) CHECK(st.sources[d] != 2);
    }
    SUBCASE("scope of two always picks the other particle") {
        const std::vector<std::size_t> two{2, 4};
        const ExemplarState st = build_exemplar(2, pool.pbests, pool.fitness, 1.0, two, rng);
        for (std::size_t d = 0; d < 10; ++d) CHECK(st.sources[d] == 4);
    }
}

TEST_CASE("exemplar provenance, scope safety and replay (property)") {
    const Pool pool = make_pool(12, 7);
    const auto explore = iota(8, 12);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng a(seed);
        Rng b(seed);
        const std::size_t owner = 8 + seed % 4;
        const double eta = learning_probability(1 + seed % 4, 4);
        const ExemplarState x = build_exemplar(owner, pool.pbests, pool.fitness, eta, explore, a);
        const ExemplarState y = build_exemplar(owner, pool.pbests, pool.fitness, eta, explore, b);
        REQUIRE(x.sources == y.sources);
        REQUIRE(x.exemplar == y.exemplar);
        bool borrowed = false;
        for (std::size_t d = 0; d < 7; ++d) {
            REQUIRE(x.sources[d] >= 8);
            REQUIRE(x.exemplar[d] == pool.pbests[x.sources[d]][d]);
            borrowed = borrowed || x.sources[d] != owner;
        }
        REQUIRE(borrowed);
    }
}

TEST_CASE("materialize follows current personal bests") {
    Pool pool = make_pool(4, 3);
    Rng rng(4);
    ExemplarState st = build_exemplar(0, pool.pbests, pool.fitness, 1.0, iota(0, 4), rng);
    for (auto& pb : pool.pbests)
        for (auto& v : pb) v += 100.0;
    materialize(st, pool.pbests);
    for (std::size_t d = 0; d < 3; ++d) CHECK(st.exemplar[d] == pool.pbests[st.sources[d]][d]);
}

TEST_CASE("refresh gap") {
    CHECK_FALSE(maybe_refresh(0, 7));
    CHECK(maybe_refresh(7, 7));
    CHECK_FALSE(maybe_refresh(6, 7));
    CHECK_THROWS(maybe_refresh(3, 0));
}
