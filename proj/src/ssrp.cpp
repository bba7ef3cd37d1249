#include "spade/ssrp.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

namespace spade {

std::vector<double> ssrp_phi(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("ssrp: empty code");
    // prefix[j] = x_1 + ... + x_j, so the inner sum over k = a+1..j is prefix[j] - prefix[a].
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) prefix[j + 1] = prefix[j] + x[j];
    const auto span_sum = [&](long j, long a) { return prefix[static_cast<std::size_t>(j)] - prefix[static_cast<std::size_t>(std::labs(a))]; };

    const long nl = static_cast<long>(n);
    std::vector<double> phi(2 * n - 1);
    for (long i = 1; i <= nl; ++i) {
        double odd = 0.0;
        for (long j = i; j <= nl; ++j) odd += std::cos(span_sum(j, 2 * i - j - 1));
        phi[static_cast<std::size_t>(2 * i - 2)] = odd;
        if (i < nl) {
            double even = 0.5;
            for (long j = i + 1; j <= nl; ++j) even += std::cos(span_sum(j, 2 * i - j));
            phi[static_cast<std::size_t>(2 * i - 1)] = even;
        }
    }
    return phi;
}

double ssrp_objective(std::span<const double> x) {
    double worst = 0.0;
    for (double p : ssrp_phi(x)) worst = std::max(worst, std::abs(p));
    return worst;
}

Objective make_ssrp_objective(SsrpInstance instance) {
    return Objective{"ssrp", Bounds::uniform(instance.n, 0.0, 2.0 * std::numbers::pi),
                     [](std::span<const double> x) { return ssrp_objective(x); }, std::nullopt};
}

}  // namespace spade
