#include "spade/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace spade {

AdjacencyMatrix AdjacencyMatrix::identity(std::size_t n) {
    AdjacencyMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
}

AdjacencyMatrix AdjacencyMatrix::complete(std::size_t n) {
    AdjacencyMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.set(i, j);
    return m;
}

AdjacencyMatrix AdjacencyMatrix::from_rows(const std::vector<std::string>& rows) {
    AdjacencyMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::size_t j = 0;
        for (char c : rows[i]) {
            if (c == ' ' || c == '\t') continue;
            if ((c != '0' && c != '1') || j >= rows.size())
                throw std::invalid_argument("adjacency row " + std::to_string(i) + " is malformed");
            m.set(i, j++, c == '1');
        }
        if (j != rows.size())
            throw std::invalid_argument("adjacency row " + std::to_string(i) + " has wrong length");
    }
    return m;
}

std::size_t AdjacencyMatrix::out_degree(std::size_t i) const {
    const auto r = cells_.row(i);
    return static_cast<std::size_t>(std::count(r.begin(), r.end(), std::uint8_t{1}));
}

std::size_t AdjacencyMatrix::in_degree(std::size_t j) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < size(); ++i) c += cells_(i, j);
    return c;
}

std::size_t AdjacencyMatrix::edge_count() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < size(); ++i) c += out_degree(i);
    return c;
}

std::string AdjacencyMatrix::to_text() const {
    std::string s;
    s.reserve(size() * (size() + 1));
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < size(); ++j) s.push_back(cells_(i, j) ? '1' : '0');
        s.push_back('\n');
    }
    return s;
}

std::ostream& operator<<(std::ostream& os, const AdjacencyMatrix& m) { return os << m.to_text(); }

std::string to_string(TopologyVariant v) {
    switch (v) {
        case TopologyVariant::distance: return "distance";
        case TopologyVariant::serial: return "serial";
        case TopologyVariant::combined: return "combined";
    }
    return "?";
}

TopologyVariant parse_topology(const std::string& name) {
    if (name == "distance") return TopologyVariant::distance;
    if (name == "serial") return TopologyVariant::serial;
    if (name == "combined") return TopologyVariant::combined;
    throw std::invalid_argument("unknown topology '" + name + "' (valid: distance, serial, combined)");
}

DistanceMatrix distance_matrix(std::span<const Vector> positions) {
    const std::size_t n = positions.size();
    DistanceMatrix d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < positions[i].size(); ++k) {
                const double diff = positions[i][k] - positions[j][k];
                s += diff * diff;
            }
            d(i, j) = d(j, i) = std::sqrt(s);
        }
    }
    return d;
}

int degree_bound(int k, int v_ulk, long t, long T) {
    if (T <= 0) throw std::invalid_argument("degree_bound: maximal iteration count T must be positive");
    // Integer arithmetic keeps the floor exact.
    return k + static_cast<int>((static_cast<long long>(v_ulk) * t) / T);
}

AdjacencyMatrix knn_graph(const DistanceMatrix& dist, std::size_t u_lk) {
    const std::size_t n = dist.size();
    if (u_lk > n)
        throw std::invalid_argument("knn_graph: out-degree " + std::to_string(u_lk) + " exceeds population " +
                                    std::to_string(n));
    AdjacencyMatrix a(n);
    if (u_lk == 0) return a;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        a.set(i, i);
        order.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) order.push_back(j);
        const std::size_t take = u_lk - 1;
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                          [&](std::size_t x, std::size_t y) {
                              if (dist(i, x) != dist(i, y)) return dist(i, x) < dist(i, y);
                              return x < y;
                          });
        for (std::size_t r = 0; r < take; ++r) a.set(i, order[r]);
    }
    return a;
}

AdjacencyMatrix serial_ring_graph(std::size_t n, std::size_t k) {
    AdjacencyMatrix a = AdjacencyMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t s = 1; s <= k && s < n; ++s) a.set(i, (i + s) % n);
    return a;
}

namespace {

// Binomial coefficient as a double; exact for the population sizes used here.
double choose(std::size_t n, std::size_t r) {
    if (r > n) return 0.0;
    r = std::min(r, n - r);
    double c = 1.0;
    for (std::size_t i = 1; i <= r; ++i) c = c * static_cast<double>(n - r + i) / static_cast<double>(i);
    return std::round(c);
}

}  // namespace

double expert_probability(std::size_t rank, std::size_t n, std::size_t n_exp) {
    if (rank < 1 || rank > n || n_exp < 1 || n_exp > n)
        throw std::invalid_argument("expert_probability: need 1 <= rank <= n and 1 <= n_exp <= n");
    if (n - rank < n_exp - 1) return 0.0;
    return choose(n - rank, n_exp - 1) / choose(n, n_exp);
}

std::vector<std::size_t> fitness_ranks(std::span<const double> fitness) {
    std::vector<std::size_t> order(fitness.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });
    std::vector<std::size_t> rank(fitness.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;
    return rank;
}

AdjacencyMatrix union_graph(const AdjacencyMatrix& a, const AdjacencyMatrix& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("union_graph: size mismatch " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
    AdjacencyMatrix u = a;
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (b(i, j)) u.set(i, j);
    return u;
}

AdjacencyMatrix union_graph(const AdjacencyMatrix& a, const AdjacencyMatrix& b, const AdjacencyMatrix& learned) {
    return union_graph(union_graph(a, b), learned);
}

void record_learned_edge(std::size_t voter, std::size_t sbest, bool improved, AdjacencyMatrix& learned) {
    if (voter >= learned.size() || sbest >= learned.size())
        throw std::out_of_range("record_learned_edge: index out of range");
    if (improved) learned.set(voter, sbest);
}

}  // namespace spade
