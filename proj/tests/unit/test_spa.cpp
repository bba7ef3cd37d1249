#include "spade/spa.hpp"

#include "../common/spa_oracle.hpp"

#include <doctest.h>

#include <numeric>

using namespace spade;

namespace {

bool same(const Rational& r, const oracle::Frac& f) { return r.num() == f.num && r.den() == f.den; }

}  // namespace

TEST_CASE("worked five-particle example") {
    const SpaInstance demo = demo_instance();
    const ExactSpaReport rep = run_spa<Rational>(demo.graph, demo.fitness);
    CHECK(rep.votes == VoteVector{0, 2, 0, 2, 1});
    CHECK(rep.candidates == std::vector<std::size_t>{0, 1, 2});
    CHECK(rep.actual_turnout == std::vector<Rational>{{2, 5}, {1, 5}, {2, 5}, 0, 0});
    CHECK(rep.prevalence == std::vector<Rational>{{3, 5}, {3, 5}, {2, 5}, {2, 5}, {3, 5}});
    CHECK(rep.popularity(0, 0) == Rational(9, 25));
    for (std::size_t j = 1; j < 5; ++j) CHECK(rep.popularity(0, j) == Rational(4, 25));
    CHECK(rep.expected_turnout[0].to_double() == doctest::Approx(0.24).epsilon(0.01));
    CHECK(rep.expected_turnout[1].to_double() == doctest::Approx(0.23).epsilon(0.01));
    CHECK(rep.expected_turnout[2].to_double() == doctest::Approx(0.14).epsilon(0.02));
    CHECK(rep.theta[0].to_double() == doctest::Approx(1.65).epsilon(0.01));
    CHECK(rep.theta[1].to_double() == doctest::Approx(0.86).epsilon(0.01));
    CHECK(rep.theta[2].to_double() == doctest::Approx(2.81).epsilon(0.01));
    CHECK(rep.sbest == 2);

    const SpaReport approx = run_spa(demo.graph, demo.fitness);
    CHECK(approx.sbest == 2);
    CHECK(approx.theta[2] == doctest::Approx(rep.theta[2].to_double()));
}

TEST_CASE("voting") {
    const std::vector<double> f{3, 1, 2, 5};
    CHECK(vote(AdjacencyMatrix::complete(4), f) == VoteVector{1, 1, 1, 1});
    CHECK(vote(AdjacencyMatrix::identity(4), f) == VoteVector{0, 1, 2, 3});
    const std::vector<double> tied{1, 1, 1, 1};
    CHECK(vote(AdjacencyMatrix::complete(4), tied) == VoteVector{0, 0, 0, 0});
    AdjacencyMatrix isolated = AdjacencyMatrix::identity(4);
    isolated.set(2, 2, false);
    CHECK_THROWS(vote(isolated, f));
}

TEST_CASE("turnouts and prevalence") {
    const auto r_at = actual_turnout<Rational>({0, 2, 0, 2, 1}, 5);
    CHECK(r_at == std::vector<Rational>{{2, 5}, {1, 5}, {2, 5}, 0, 0});
    CHECK(actual_turnout<Rational>({1, 1, 1}, 3)[1] == Rational(1));
    for (const auto& v : actual_turnout<Rational>({0, 1, 2, 3}, 4)) CHECK(v == Rational(1, 4));

    for (const auto& v : knowledge_prevalence<Rational>(AdjacencyMatrix::complete(4))) CHECK(v == Rational(1));
    for (const auto& v : knowledge_prevalence<Rational>(AdjacencyMatrix::identity(4))) CHECK(v == Rational(1, 4));
}

TEST_CASE("popularity matrix and expected turnout") {
    const AdjacencyMatrix id = AdjacencyMatrix::identity(3);
    const auto kp = knowledge_prevalence<Rational>(id);
    const auto alpha = popularity_matrix<Rational>(id, {0, 1, 2}, kp);
    CHECK(alpha(0, 0) == Rational(1, 3));
    CHECK(alpha(0, 1) == Rational(1, 3));
    CHECK_THROWS(popularity_matrix<Rational>(AdjacencyMatrix::identity(1), {0},
                                             knowledge_prevalence<Rational>(AdjacencyMatrix::identity(1))));

    // Two particles that know each other and vote for each other.
    const AdjacencyMatrix pair = AdjacencyMatrix::complete(2);
    const auto kp2 = knowledge_prevalence<Rational>(pair);
    const auto alpha2 = popularity_matrix<Rational>(pair, {1, 0}, kp2);
    const auto r_et = expected_turnout<Rational>(alpha2);
    CHECK(r_et == std::vector<Rational>{{1, 2}, {1, 2}});
}

TEST_CASE("surprising popularity edge cases") {
    const std::vector<double> f{2.0, 1.0, 3.0};
    const std::vector<std::size_t> single{1};
    const std::vector<double> r_at{0.0, 1.0, 0.0};
    const std::vector<double> r_et{0.2, 0.5, 0.3};
    const auto one = surprising_popularity<double>(r_at, r_et, single, f);
    CHECK(one.theta.size() == 1);
    CHECK(one.sbest == 1);

    const std::vector<std::size_t> all{0, 1, 2};
    const std::vector<double> even{0.2, 0.5, 0.3};
    CHECK(surprising_popularity<double>(even, even, all, f).sbest == 1);

    const std::vector<double> zero{0.0, 0.5, 0.3};
    CHECK_THROWS_AS(surprising_popularity<double>(even, zero, all, f), std::domain_error);
}

TEST_CASE("complete graph selects the global best") {
    const std::vector<double> f{4, 2, 9, 1, 7};
    CHECK(run_spa(AdjacencyMatrix::complete(5), f).sbest == 3);
}

TEST_CASE("random instances match the from-definitions oracle (property)") {
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng.below(6);
        AdjacencyMatrix g(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) g.set(i, j, rng.uniform() < 0.4);
            g.set(i, rng.below(n));
        }
        std::vector<double> f(n);
        for (auto& v : f) v = static_cast<double>(rng.below(4));

        const ExactSpaReport rep = run_spa<Rational>(g, f);
        const oracle::Result want = oracle::spa(g, f);
        REQUIRE(rep.votes == want.votes);
        REQUIRE(rep.candidates == want.candidates);
        for (std::size_t k = 0; k < n; ++k) {
            REQUIRE(same(rep.actual_turnout[k], want.r_at[k]));
            REQUIRE(same(rep.prevalence[k], want.r_kp[k]));
            REQUIRE(same(rep.expected_turnout[k], want.r_et[k]));
            for (std::size_t j = 0; j < n; ++j) REQUIRE(same(rep.popularity(k, j), want.alpha[k][j]));
        }
        for (std::size_t c = 0; c < want.theta.size(); ++c) REQUIRE(same(rep.theta[c], want.theta[c]));
        REQUIRE(rep.sbest == want.sbest);

        // Normalization invariants.
        Rational at_sum(0), et_sum(0);
        for (std::size_t k = 0; k < n; ++k) {
            at_sum = at_sum + rep.actual_turnout[k];
            et_sum = et_sum + rep.expected_turnout[k];
            Rational row(0);
            for (std::size_t j = 0; j < n; ++j) row = row + rep.popularity(k, j);
            REQUIRE(row == Rational(1));
            REQUIRE(rep.prevalence[k] <= Rational(1));
        }
        REQUIRE(at_sum == Rational(1));
        REQUIRE(et_sum == Rational(1));
        REQUIRE(std::find(rep.candidates.begin(), rep.candidates.end(), rep.sbest) != rep.candidates.end());

        // Positive rescaling of fitness leaves the decision unchanged.
        std::vector<double> scaled = f;
        for (auto& v : scaled) v *= 3.5;
        REQUIRE(run_spa<Rational>(g, scaled).sbest == rep.sbest);

        // Floating-point pipeline agrees.
        REQUIRE(run_spa(g, f).sbest == rep.sbest);
    }
}

TEST_CASE("trace line") {
    const SpaInstance demo = demo_instance();
    const std::string line = to_trace_line(run_spa(demo.graph, demo.fitness));
    CHECK(line.rfind("sbest=2 ", 0) == 0);
    CHECK(line.find("votes=0,2,0,2,1") != std::string::npos);
}
