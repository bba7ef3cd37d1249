#pragma once

#include "spade/core.hpp"

#include <algorithm>
#include <span>
#include <vector>

namespace spade {

/// Per-dimension learning exemplar built from personal bests.
struct ExemplarState {
    std::size_t owner = 0;
    std::vector<std::size_t> sources;  ///< Particle whose pbest feeds each dimension.
    Vector exemplar;                   ///< pbest[sources[d]][d], refreshed by materialize().
};

/// eta_i = 0.05 + 0.45 (exp(10 (i - 1) / (ps - 1)) - 1) / (exp(10) - 1), i in 1..ps.
/// A sub-population of one gets 0.05.
double learning_probability(std::size_t i, std::size_t ps);

/// Rewrite `state.exemplar` from the current personal bests of its sources.
void materialize(ExemplarState& state, std::span<const Vector> pbests);

/// Tournament of size two among `scope` minus the owner; the lower pbest
/// fitness wins, ties to the first draw. With a single eligible particle the
/// tournament returns it.
template <UniformSource R>
std::size_t tournament(std::size_t owner, std::span<const std::size_t> scope, std::span<const double> pbest_fitness,
                       R& rng) {
    const auto it = std::find(scope.begin(), scope.end(), owner);
    const auto owner_pos = static_cast<std::size_t>(it - scope.begin());
    const std::size_t eligible = scope.size() - (it != scope.end() ? 1 : 0);
    if (eligible == 0) return owner;
    // Map [0, eligible) onto scope positions, skipping the owner's slot.
    const auto pick = [&](std::size_t k) { return scope[k >= owner_pos ? k + 1 : k]; };
    if (eligible == 1) return pick(0);
    const std::size_t a = rng.below(eligible);
    std::size_t b = rng.below(eligible - 1);
    if (b >= a) ++b;
    const std::size_t pa = pick(a);
    const std::size_t pb = pick(b);
    return pbest_fitness[pb] < pbest_fitness[pa] ? pb : pa;
}

/// Comprehensive-learning exemplar for `owner`.
///
/// Each dimension comes from a tournament winner with probability `eta` and
/// from the owner's own pbest otherwise. If no dimension was borrowed, one
/// uniformly chosen dimension is forced to a tournament winner.
template <UniformSource R>
ExemplarState build_exemplar(std::size_t owner, std::span<const Vector> pbests, std::span<const double> pbest_fitness,
                             double eta, std::span<const std::size_t> scope, R& rng) {
    const std::size_t dim = pbests[owner].size();
    ExemplarState st;
    st.owner = owner;
    st.sources.assign(dim, owner);
    bool borrowed = false;
    for (std::size_t d = 0; d < dim; ++d) {
        if (rng.uniform() < eta) {
            st.sources[d] = tournament(owner, scope, pbest_fitness, rng);
            borrowed = borrowed || st.sources[d] != owner;
        }
    }
    if (!borrowed) {
        const std::size_t d = rng.below(dim);
        st.sources[d] = tournament(owner, scope, pbest_fitness, rng);
    }
    materialize(st, pbests);
    return st;
}

/// True once `refresh_counter` evaluations passed without pbest improvement.
bool maybe_refresh(std::size_t refresh_counter, std::size_t m);

}  // namespace spade
