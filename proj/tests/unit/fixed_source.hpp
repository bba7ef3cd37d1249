#pragma once

#include <cstddef>
#include <vector>

// Deterministic stand-in for Rng: cycles through scripted draws.
struct FixedSource {
    std::vector<double> uniforms{0.5};
    std::vector<std::size_t> indices{0};
    std::size_t u_pos = 0;
    std::size_t i_pos = 0;

    double uniform() { return uniforms[u_pos++ % uniforms.size()]; }
    std::size_t below(std::size_t n) { return indices[i_pos++ % indices.size()] % n; }
};
