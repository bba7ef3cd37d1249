#pragma once

#include "spade/core.hpp"

#include <span>
#include <vector>

namespace spade {

/// Mean Euclidean distance of the group's particles to their centroid.
double diversity(std::span<const Vector> positions);
/// Same, restricted to `members` of `positions`.
double diversity(std::span<const Vector> positions, std::span<const std::size_t> members);

struct ErrorStats {
    double best = 0.0;
    double mean = 0.0;
    double std = 0.0;  ///< Sample standard deviation; 0 for a single run.
};

ErrorStats error_stats(std::span<const double> errors);

/// Paired comparison of algorithm A against B over a set of functions.
/// Lower values are better: a "win" is a function where A's value is smaller.
struct ComparisonVerdict {
    std::size_t wins = 0;
    std::size_t losses = 0;
    std::size_t ties = 0;
    double p_value = 1.0;      ///< Two-sided.
    double statistic = 0.0;    ///< min(W+, W-) over nonzero differences.
    std::size_t nonzero = 0;   ///< Pairs left after dropping zero differences.
    bool exact = true;         ///< Exact enumeration rather than normal approximation.
};

/// Pairs with at most this many nonzero differences use exact enumeration.
inline constexpr std::size_t wilcoxon_exact_limit = 12;

/// Average ranks (1-based) of the values, ties sharing the mean rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Two-sided exact p of the signed-rank statistic for the given nonzero
/// differences, enumerating every sign assignment of their (tied) ranks.
double wilcoxon_exact_p(std::span<const double> differences);

/// Two-sided normal-approximation p with tie and continuity corrections.
double wilcoxon_normal_p(std::span<const double> differences);

/// Wilcoxon signed-rank test of a against b. Requires equal lengths >= 5.
ComparisonVerdict wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

struct FriedmanResult {
    std::vector<double> average_rank;      ///< Per configuration.
    std::vector<std::size_t> final_rank;   ///< Ordinal (1 = best), ties to lower index.
};

/// `results[c][f]` is the error of configuration c on function f.
FriedmanResult friedman_ranks(const std::vector<std::vector<double>>& results);

}  // namespace spade
