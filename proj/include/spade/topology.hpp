#pragma once

#include "spade/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace spade {

/// Dense square n x n matrix in row-major order.
template <class T>
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

    std::size_t size() const noexcept { return n_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    std::span<const T> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<T> data_;
};

using DistanceMatrix = SquareMatrix<double>;

/// Directed 0/1 adjacency: entry (i, j) set means i can assess and learn from j.
class AdjacencyMatrix {
public:
    AdjacencyMatrix() = default;
    explicit AdjacencyMatrix(std::size_t n) : cells_(n, 0) {}

    static AdjacencyMatrix identity(std::size_t n);
    static AdjacencyMatrix complete(std::size_t n);
    /// Parse a dense grid of '0'/'1' rows (whitespace between cells optional).
    static AdjacencyMatrix from_rows(const std::vector<std::string>& rows);

    std::size_t size() const noexcept { return cells_.size(); }
    bool operator()(std::size_t i, std::size_t j) const { return cells_(i, j) != 0; }
    void set(std::size_t i, std::size_t j, bool on = true) { cells_(i, j) = on ? 1 : 0; }

    std::size_t out_degree(std::size_t i) const;
    std::size_t in_degree(std::size_t j) const;
    std::size_t edge_count() const;

    /// Dense 0/1 text grid, one row per line.
    std::string to_text() const;

    friend bool operator==(const AdjacencyMatrix&, const AdjacencyMatrix&) = default;

private:
    SquareMatrix<std::uint8_t> cells_;
};

std::ostream& operator<<(std::ostream& os, const AdjacencyMatrix& m);

/// The three knowledge-transfer topologies that can feed the SPA vote.
enum class TopologyVariant {
    distance,  ///< Euclidean kNN + expert graph.
    serial,    ///< Ring to i+1..i+k + learned edges + expert graph.
    combined,  ///< Euclidean kNN + learned edges + expert graph.
};

std::string to_string(TopologyVariant v);
TopologyVariant parse_topology(const std::string& name);

/// Pairwise Euclidean distances between positions.
DistanceMatrix distance_matrix(std::span<const Vector> positions);

/// Out-degree of the distance graph at iteration t of T: floor(k + v_ulk * t / T).
int degree_bound(int k, int v_ulk, long t, long T);

/// Self-loop plus the (u_lk - 1) nearest other particles, ties to lower index.
AdjacencyMatrix knn_graph(const DistanceMatrix& dist, std::size_t u_lk);

/// Self-loop plus unidirectional edges to i+1..i+k (mod n).
AdjacencyMatrix serial_ring_graph(std::size_t n, std::size_t k);

/// C(n - rank, n_exp - 1) / C(n, n_exp): chance that particle of rank `rank`
/// (1 = best) is the best of a uniformly random n_exp-subset.
double expert_probability(std::size_t rank, std::size_t n, std::size_t n_exp);

/// Ranks by ascending fitness, 1 = best; ties go to the lower index.
std::vector<std::size_t> fitness_ranks(std::span<const double> fitness);

/// Random edges toward the n_exp best-ranked particles.
///
/// b(i, j) = 1 iff rank[j] <= n_exp and an independent uniform draw falls
/// below expert_probability(rank[j]). n_exp = 0 yields the empty graph.
template <UniformSource R>
AdjacencyMatrix expert_graph(std::span<const std::size_t> ranks, std::size_t n_exp, R& rng) {
    const std::size_t n = ranks.size();
    AdjacencyMatrix b(n);
    if (n_exp == 0) return b;
    std::vector<double> prob(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        if (ranks[j] <= n_exp) prob[j] = expert_probability(ranks[j], n, n_exp);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (ranks[j] <= n_exp && rng.uniform() < prob[j]) b.set(i, j);
    return b;
}

/// Elementwise OR; throws std::invalid_argument on size mismatch.
AdjacencyMatrix union_graph(const AdjacencyMatrix& a, const AdjacencyMatrix& b);
AdjacencyMatrix union_graph(const AdjacencyMatrix& a, const AdjacencyMatrix& b,
                            const AdjacencyMatrix& learned);

/// Adds voter -> sbest when the voter improved this iteration.
void record_learned_edge(std::size_t voter, std::size_t sbest, bool improved, AdjacencyMatrix& learned);

}  // namespace spade
