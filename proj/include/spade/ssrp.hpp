#pragma once

#include "spade/core.hpp"

#include <span>
#include <vector>

namespace spade {

/// Polyphase code design problem of length n with m = 2n - 1 autocorrelation terms.
struct SsrpInstance {
    std::size_t n = 20;

    std::size_t m() const noexcept { return 2 * n - 1; }
};

/// phi_1 .. phi_m (the negated copies phi_{m+1} .. phi_{2m} are implied).
std::vector<double> ssrp_phi(std::span<const double> x);

/// max over phi_1 .. phi_2m, i.e. max_i |phi_i|.
double ssrp_objective(std::span<const double> x);

/// Objective "ssrp" on [0, 2 pi]^n. There is no known optimum.
Objective make_ssrp_objective(SsrpInstance instance = {});

}  // namespace spade
