#include "spade/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spade {

double diversity(std::span<const Vector> positions, std::span<const std::size_t> members) {
    if (members.empty()) throw std::invalid_argument("diversity: empty group");
    const std::size_t dim = positions[members.front()].size();
    Vector centroid(dim, 0.0);
    for (std::size_t i : members)
        for (std::size_t d = 0; d < dim; ++d) centroid[d] += positions[i][d];
    for (double& c : centroid) c /= static_cast<double>(members.size());
    double total = 0.0;
    for (std::size_t i : members) {
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = positions[i][d] - centroid[d];
            s += diff * diff;
        }
        total += std::sqrt(s);
    }
    return total / static_cast<double>(members.size());
}

double diversity(std::span<const Vector> positions) {
    std::vector<std::size_t> all(positions.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return diversity(positions, all);
}

ErrorStats error_stats(std::span<const double> errors) {
    if (errors.empty()) throw std::invalid_argument("error_stats: no runs");
    ErrorStats s;
    s.best = *std::min_element(errors.begin(), errors.end());
    s.mean = std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
    if (errors.size() > 1) {
        double ss = 0.0;
        for (double e : errors) ss += (e - s.mean) * (e - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(errors.size() - 1));
    }
    return s;
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

namespace {

struct SignedRanks {
    std::vector<double> ranks;  // of |d|
    double w_plus = 0.0;
    double w_minus = 0.0;
};

SignedRanks signed_ranks(std::span<const double> differences) {
    std::vector<double> mags(differences.size());
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(differences[i]);
    SignedRanks sr;
    sr.ranks = average_ranks(mags);
    for (std::size_t i = 0; i < mags.size(); ++i)
        (differences[i] > 0 ? sr.w_plus : sr.w_minus) += sr.ranks[i];
    return sr;
}

}  // namespace

double wilcoxon_exact_p(std::span<const double> differences) {
    const std::size_t n = differences.size();
    if (n == 0) return 1.0;
    if (n > 30) throw std::invalid_argument("wilcoxon_exact_p: too many pairs to enumerate");
    const SignedRanks sr = signed_ranks(differences);
    // Average ranks are multiples of 1/2, so doubled ranks are exact integers
    // and the null distribution is a subset-sum count over them.
    std::vector<std::size_t> twice(n);
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        twice[i] = static_cast<std::size_t>(std::llround(2.0 * sr.ranks[i]));
        total += twice[i];
    }
    std::vector<double> ways(total + 1, 0.0);
    ways[0] = 1.0;
    for (std::size_t r : twice)
        for (std::size_t s = total; s >= r; --s) ways[s] += ways[s - r];
    const auto observed = static_cast<std::size_t>(std::llround(2.0 * std::min(sr.w_plus, sr.w_minus)));
    double tail = 0.0;
    for (std::size_t s = 0; s <= observed; ++s) tail += ways[s];
    return std::min(1.0, 2.0 * tail / std::ldexp(1.0, static_cast<int>(n)));
}

double wilcoxon_normal_p(std::span<const double> differences) {
    const std::size_t n = differences.size();
    if (n == 0) return 1.0;
    const SignedRanks sr = signed_ranks(differences);
    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
    std::vector<double> sorted = sr.ranks;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        var -= (t * t * t - t) / 48.0;
        i = j + 1;
    }
    if (var <= 0.0) return 1.0;
    const double w = std::min(sr.w_plus, sr.w_minus);
    const double z = std::min(0.0, w - mean + 0.5) / std::sqrt(var);
    return std::min(1.0, std::erfc(-z / std::sqrt(2.0)));
}

ComparisonVerdict wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("wilcoxon_signed_rank: samples differ in length");
    if (a.size() < 5) throw std::invalid_argument("wilcoxon_signed_rank: need at least 5 pairs");
    ComparisonVerdict v;
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d < 0) ++v.wins;
        else if (d > 0) ++v.losses;
        else ++v.ties;
        if (d != 0) diffs.push_back(d);
    }
    v.nonzero = diffs.size();
    if (diffs.empty()) return v;
    const SignedRanks sr = signed_ranks(diffs);
    v.statistic = std::min(sr.w_plus, sr.w_minus);
    v.exact = diffs.size() <= wilcoxon_exact_limit;
    v.p_value = v.exact ? wilcoxon_exact_p(diffs) : wilcoxon_normal_p(diffs);
    return v;
}

FriedmanResult friedman_ranks(const std::vector<std::vector<double>>& results) {
    const std::size_t configs = results.size();
    if (configs < 2) throw std::invalid_argument("friedman_ranks: need at least two configurations");
    const std::size_t functions = results.front().size();
    for (const auto& row : results)
        if (row.size() != functions) throw std::invalid_argument("friedman_ranks: ragged result matrix");
    if (functions == 0) throw std::invalid_argument("friedman_ranks: no functions");
    FriedmanResult out;
    out.average_rank.assign(configs, 0.0);
    std::vector<double> column(configs);
    for (std::size_t f = 0; f < functions; ++f) {
        for (std::size_t c = 0; c < configs; ++c) column[c] = results[c][f];
        const auto r = average_ranks(column);
        for (std::size_t c = 0; c < configs; ++c) out.average_rank[c] += r[c];
    }
    for (double& r : out.average_rank) r /= static_cast<double>(functions);
    std::vector<std::size_t> order(configs);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return out.average_rank[x] < out.average_rank[y]; });
    out.final_rank.resize(configs);
    for (std::size_t r = 0; r < configs; ++r) out.final_rank[order[r]] = r + 1;
    return out;
}

}  // namespace spade
