#include "spade/spa.hpp"

#include <sstream>

namespace spade {

VoteVector vote(const AdjacencyMatrix& graph, std::span<const double> fitness) {
    const std::size_t n = graph.size();
    if (fitness.size() != n) throw std::invalid_argument("vote: fitness/graph size mismatch");
    VoteVector votes(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool found = false;
        std::size_t best = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!graph(i, j)) continue;
            if (!found || fitness[j] < fitness[best]) best = j;
            found = true;
        }
        if (!found) throw std::invalid_argument("vote: particle " + std::to_string(i) + " has no neighbours");
        votes[i] = best;
    }
    return votes;
}

std::vector<std::size_t> candidate_set(const VoteVector& votes) {
    std::vector<std::size_t> c(votes.begin(), votes.end());
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

std::string to_trace_line(const SpaReport& report) {
    std::ostringstream os;
    os.precision(17);
    os << "sbest=" << report.sbest << " candidates=";
    for (std::size_t c = 0; c < report.candidates.size(); ++c) {
        const std::size_t k = report.candidates[c];
        if (c) os << ',';
        os << k << ':' << report.actual_turnout[k] << ':' << report.expected_turnout[k] << ':' << report.theta[c];
    }
    os << " votes=";
    for (std::size_t i = 0; i < report.votes.size(); ++i) {
        if (i) os << ',';
        os << report.votes[i];
    }
    return os.str();
}

SpaInstance demo_instance() {
    return {AdjacencyMatrix::from_rows({"10001", "01101", "10010", "01111", "11000"}), {2.0, 1.0, 0.0, 3.0, 4.0}};
}

}  // namespace spade
