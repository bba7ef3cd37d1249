#include "spade/exemplar.hpp"

#include <cmath>
#include <stdexcept>

namespace spade {

double learning_probability(std::size_t i, std::size_t ps) {
    if (ps <= 1) return 0.05;
    if (i < 1 || i > ps) throw std::invalid_argument("learning_probability: rank outside 1..ps");
    const double x = 10.0 * static_cast<double>(i - 1) / static_cast<double>(ps - 1);
    return 0.05 + 0.45 * std::expm1(x) / std::expm1(10.0);
}

void materialize(ExemplarState& state, std::span<const Vector> pbests) {
    state.exemplar.resize(state.sources.size());
    for (std::size_t d = 0; d < state.sources.size(); ++d) state.exemplar[d] = pbests[state.sources[d]][d];
}

bool maybe_refresh(std::size_t refresh_counter, std::size_t m) {
    if (m < 1) throw std::invalid_argument("maybe_refresh: refresh gap must be at least 1");
    return refresh_counter >= m;
}

}  // namespace spade
