#pragma once

// Surprisingly popular decision over a knowledge-transfer graph.
//
// Every particle votes for its best-fitness neighbour. A candidate's actual
// turnout is its vote share; its expected turnout is what the population
// predicts that share to be, given how widely each voter's neighbours are
// known. The exemplar (sbest) is the candidate whose actual turnout most
// exceeds its expected turnout.
//
// The stages are templates over the scalar type so the same code runs in
// double precision inside the optimizer and in exact rationals in tests.

#include "spade/rational.hpp"
#include "spade/topology.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spade {

/// j*_i for every particle i (0-based).
using VoteVector = std::vector<std::size_t>;

template <class Scalar>
struct BasicSpaReport {
    VoteVector votes;
    std::vector<std::size_t> candidates;  ///< Distinct voted indices, ascending.
    std::vector<Scalar> actual_turnout;   ///< r_at, length n, zero off the candidate set.
    std::vector<Scalar> prevalence;       ///< r_kp, length n.
    SquareMatrix<Scalar> popularity;      ///< alpha, rows sum to one.
    std::vector<Scalar> expected_turnout; ///< r_et, length n.
    std::vector<Scalar> theta;            ///< Aligned with `candidates`.
    std::size_t sbest = 0;
};

using SpaReport = BasicSpaReport<double>;
using ExactSpaReport = BasicSpaReport<Rational>;

namespace detail {

template <class Scalar>
Scalar ratio(std::size_t num, std::size_t den) {
    if constexpr (std::is_same_v<Scalar, Rational>)
        return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
    else
        return static_cast<Scalar>(num) / static_cast<Scalar>(den);
}

inline bool same_value(const Rational& a, const Rational& b) { return a == b; }
inline bool same_value(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}

}  // namespace detail

/// Each particle votes for the lowest-fitness particle among its out-neighbours
/// (ties to the lower index). Throws if a row has no neighbours.
VoteVector vote(const AdjacencyMatrix& graph, std::span<const double> fitness);

/// Sorted distinct entries of the vote vector.
std::vector<std::size_t> candidate_set(const VoteVector& votes);

template <class Scalar = double>
std::vector<Scalar> actual_turnout(const VoteVector& votes, std::size_t n) {
    std::vector<std::size_t> count(n, 0);
    for (std::size_t v : votes) ++count.at(v);
    std::vector<Scalar> r(n, Scalar{0});
    for (std::size_t k = 0; k < n; ++k)
        if (count[k] > 0) r[k] = detail::ratio<Scalar>(count[k], n);
    return r;
}

/// Column density of the graph: the share of particles that know particle j.
template <class Scalar = double>
std::vector<Scalar> knowledge_prevalence(const AdjacencyMatrix& graph) {
    const std::size_t n = graph.size();
    std::vector<Scalar> r(n);
    for (std::size_t j = 0; j < n; ++j) r[j] = detail::ratio<Scalar>(graph.in_degree(j), n);
    return r;
}

/// alpha(i, j*_i) is the product of the prevalences of all of i's neighbours;
/// the remaining mass is split evenly across the other n - 1 answers.
template <class Scalar = double>
SquareMatrix<Scalar> popularity_matrix(const AdjacencyMatrix& graph, const VoteVector& votes,
                                       std::span<const Scalar> prevalence) {
    const std::size_t n = graph.size();
    if (n < 2) throw std::invalid_argument("popularity_matrix: population must have at least two particles");
    if (votes.size() != n || prevalence.size() != n)
        throw std::invalid_argument("popularity_matrix: inconsistent input sizes");
    SquareMatrix<Scalar> alpha(n, Scalar{0});
    const Scalar others = detail::ratio<Scalar>(1, n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        Scalar own{1};
        for (std::size_t j = 0; j < n; ++j)
            if (graph(i, j)) own = own * prevalence[j];
        const Scalar rest = (Scalar{1} - own) * others;
        for (std::size_t j = 0; j < n; ++j) alpha(i, j) = rest;
        alpha(i, votes[i]) = own;
    }
    return alpha;
}

/// Column means of the popularity matrix.
template <class Scalar = double>
std::vector<Scalar> expected_turnout(const SquareMatrix<Scalar>& alpha) {
    const std::size_t n = alpha.size();
    std::vector<Scalar> r(n, Scalar{0});
    const Scalar inv_n = detail::ratio<Scalar>(1, n);
    for (std::size_t k = 0; k < n; ++k) {
        Scalar s{0};
        for (std::size_t i = 0; i < n; ++i) s = s + alpha(i, k);
        r[k] = s * inv_n;
    }
    return r;
}

template <class Scalar>
struct PopularityVerdict {
    std::vector<Scalar> theta;  ///< Aligned with the candidate list.
    std::size_t sbest = 0;
};

/// theta_k = r_at_k / r_et_k over the candidates; sbest maximizes theta,
/// then fitness (lower is better), then index.
template <class Scalar = double>
PopularityVerdict<Scalar> surprising_popularity(std::span<const Scalar> r_at, std::span<const Scalar> r_et,
                                                std::span<const std::size_t> candidates,
                                                std::span<const double> fitness) {
    if (candidates.empty()) throw std::invalid_argument("surprising_popularity: empty candidate set");
    PopularityVerdict<Scalar> out;
    out.theta.reserve(candidates.size());
    std::size_t best = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const std::size_t k = candidates[c];
        if (!(r_et[k] > Scalar{0}))
            throw std::domain_error("surprising_popularity: expected turnout of candidate " + std::to_string(k) +
                                    " is zero");
        out.theta.push_back(r_at[k] / r_et[k]);
        if (c == 0) continue;
        const Scalar& t = out.theta[c];
        const Scalar& tb = out.theta[best];
        const std::size_t kb = candidates[best];
        if (detail::same_value(t, tb)) {
            if (fitness[k] < fitness[kb] || (fitness[k] == fitness[kb] && k < kb)) best = c;
        } else if (t > tb) {
            best = c;
        }
    }
    out.sbest = candidates[best];
    return out;
}

/// Runs vote -> turnouts -> prevalence -> popularity -> expected turnout ->
/// theta -> sbest.
template <class Scalar = double>
BasicSpaReport<Scalar> run_spa(const AdjacencyMatrix& graph, std::span<const double> fitness) {
    if (fitness.size() != graph.size()) throw std::invalid_argument("run_spa: fitness/graph size mismatch");
    BasicSpaReport<Scalar> rep;
    const std::size_t n = graph.size();
    rep.votes = vote(graph, fitness);
    rep.candidates = candidate_set(rep.votes);
    rep.actual_turnout = actual_turnout<Scalar>(rep.votes, n);
    rep.prevalence = knowledge_prevalence<Scalar>(graph);
    rep.popularity = popularity_matrix<Scalar>(graph, rep.votes, rep.prevalence);
    rep.expected_turnout = expected_turnout<Scalar>(rep.popularity);
    auto verdict = surprising_popularity<Scalar>(rep.actual_turnout, rep.expected_turnout, rep.candidates, fitness);
    rep.theta = std::move(verdict.theta);
    rep.sbest = verdict.sbest;
    return rep;
}

/// Five-particle worked example: J* = (1,3,1,3,2) and sbest = particle 3 in
/// 1-based numbering.
struct SpaInstance {
    AdjacencyMatrix graph;
    std::vector<double> fitness;
};

SpaInstance demo_instance();

/// One-line trace record:
/// `sbest=<k> candidates=<k:r_at:r_et:theta,...> votes=<j*_1,...>` (0-based).
std::string to_trace_line(const SpaReport& report);

}  // namespace spade
