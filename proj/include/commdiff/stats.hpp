#ifndef COMMDIFF_STATS_HPP
#define COMMDIFF_STATS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "commdiff/metrics.hpp"

namespace commdiff {

struct CorrelationResult {
    double r = 0.0;
    std::size_t n = 0;
    double p_value = 1.0;
    std::string significance;  // "***" (p <= 0.001), "*" (p <= 0.05), "ns"
};

struct CorrelationOptions {
    bool spearman = false;     // rank-transform both series first
    bool permutation = false;  // permutation p-value instead of the t-test
    int permutation_draws = 10000;
    std::uint64_t seed = 0;
};

std::string significance_stars(double p);

// Sample Pearson r with a two-tailed p-value from t = r * sqrt((n-2)/(1-r^2))
// on n-2 degrees of freedom. Requires n >= 3 and nonzero variance in both
// series.
CorrelationResult pearson_with_significance(std::span<const double> xs,
                                            std::span<const double> ys,
                                            const CorrelationOptions& options = {});

// Exposed for oracle tests.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_two_tailed_p(double t, double dof);

struct CorrelationRow {
    std::string group;
    std::string metric_x;
    std::string metric_y;
    std::size_t n = 0;
    std::optional<CorrelationResult> result;  // empty -> rendered as NA
};

// The report's correlation tables: overall academic-vs-social rows, one pair
// of rows per topic, altmetric-vs-score rows, and altmetric-vs-count rows.
// `article_topics` and `altmetric` align with `impact`; cells whose input is
// degenerate (too few pairs, zero variance) come back without a result.
std::vector<CorrelationRow> correlation_tables(
    const std::vector<ImpactScores>& impact, std::span<const int> article_topics, int k,
    const std::vector<std::optional<double>>& altmetric, const CorrelationOptions& options = {},
    bool mentioned_only = false);

}  // namespace commdiff

#endif
