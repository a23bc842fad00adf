#include "commdiff/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "commdiff/errors.hpp"
#include "commdiff/rng.hpp"

namespace commdiff {

namespace {

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

// Average ranks, ties share the mean rank.
std::vector<double> rank_transform(std::span<const double> xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return xs[a] < xs[b];
    });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[idx[j + 1]] == xs[idx[i]]) ++j;
        const double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

double pearson_r(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw ZeroVarianceError();
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_tailed_p(double t, double dof) {
    if (std::isinf(t)) return 0.0;
    return regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

std::string significance_stars(double p) {
    if (p <= 0.001) return "***";
    if (p <= 0.05) return "*";
    return "ns";
}

CorrelationResult pearson_with_significance(std::span<const double> xs,
                                            std::span<const double> ys,
                                            const CorrelationOptions& options) {
    if (xs.size() != ys.size()) throw LengthMismatchError(xs.size(), ys.size());
    const std::size_t n = xs.size();
    if (n < 3) throw TooFewSamplesError(n);

    std::vector<double> rx, ry;
    std::span<const double> x = xs, y = ys;
    if (options.spearman) {
        rx = rank_transform(xs);
        ry = rank_transform(ys);
        x = rx;
        y = ry;
    }

    CorrelationResult res;
    res.n = n;
    res.r = pearson_r(x, y);

    if (options.permutation) {
        std::vector<double> perm(y.begin(), y.end());
        Rng rng(options.seed);
        const double target = std::abs(res.r) - 1e-12;
        int hits = 0;
        for (int d = 0; d < options.permutation_draws; ++d) {
            for (std::size_t i = perm.size() - 1; i > 0; --i) {
                std::swap(perm[i], perm[rng.bounded(i + 1)]);
            }
            if (std::abs(pearson_r(x, perm)) >= target) ++hits;
        }
        res.p_value = static_cast<double>(hits + 1) /
                      static_cast<double>(options.permutation_draws + 1);
    } else {
        const double dof = static_cast<double>(n - 2);
        if (std::abs(res.r) >= 1.0) {
            res.p_value = 0.0;
        } else {
            const double t = res.r * std::sqrt(dof / (1.0 - res.r * res.r));
            res.p_value = student_t_two_tailed_p(t, dof);
        }
    }
    res.significance = significance_stars(res.p_value);
    return res;
}

namespace {

struct Pair {
    double x;
    double y;
};

std::optional<CorrelationResult> cell(const std::vector<Pair>& pairs,
                                      const CorrelationOptions& options) {
    std::vector<double> xs, ys;
    xs.reserve(pairs.size());
    ys.reserve(pairs.size());
    for (const auto& p : pairs) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    try {
        return pearson_with_significance(xs, ys, options);
    } catch (const ComputeError&) {
        return std::nullopt;  // rendered as NA; partial tables beat aborts
    }
}

}  // namespace

std::vector<CorrelationRow> correlation_tables(
    const std::vector<ImpactScores>& impact, std::span<const int> article_topics, int k,
    const std::vector<std::optional<double>>& altmetric, const CorrelationOptions& options,
    bool mentioned_only) {
    if (!article_topics.empty() && article_topics.size() != impact.size()) {
        throw LengthMismatchError(article_topics.size(), impact.size());
    }
    if (altmetric.size() != impact.size()) {
        throw LengthMismatchError(altmetric.size(), impact.size());
    }

    auto include = [&](const ImpactScores& row) {
        return !mentioned_only || row.tweet_count > 0;
    };

    std::vector<CorrelationRow> rows;
    auto add_row = [&](std::string group, std::string mx, std::string my,
                       const std::vector<Pair>& pairs) {
        CorrelationRow row;
        row.group = std::move(group);
        row.metric_x = std::move(mx);
        row.metric_y = std::move(my);
        row.n = pairs.size();
        row.result = cell(pairs, options);
        rows.push_back(std::move(row));
    };

    // academic vs social, overall and per topic
    auto academic_rows = [&](const std::string& group, int topic) {
        std::vector<Pair> senti, user;
        for (std::size_t i = 0; i < impact.size(); ++i) {
            if (topic >= 0 && article_topics[i] != topic) continue;
            if (!impact[i].academic || !include(impact[i])) continue;
            senti.push_back({*impact[i].academic, impact[i].social_sentiment});
            user.push_back({*impact[i].academic, impact[i].social_user});
        }
        add_row(group, "academic_impact", "social_sentiment_impact", senti);
        add_row(group, "academic_impact", "social_user_impact", user);
    };

    academic_rows("overall", -1);
    if (!article_topics.empty()) {
        for (int t = 0; t < k; ++t) {
            academic_rows("topic_" + std::to_string(t + 1), t);  // report labels are 1-based
        }
    }

    // altmetric vs the three scores
    for (const char* metric : {"academic_impact", "social_sentiment_impact", "social_user_impact"}) {
        std::vector<Pair> pairs;
        for (std::size_t i = 0; i < impact.size(); ++i) {
            if (!altmetric[i] || !include(impact[i])) continue;
            const std::string_view m = metric;
            if (m == "academic_impact") {
                if (!impact[i].academic) continue;
                pairs.push_back({*altmetric[i], *impact[i].academic});
            } else if (m == "social_sentiment_impact") {
                pairs.push_back({*altmetric[i], impact[i].social_sentiment});
            } else {
                pairs.push_back({*altmetric[i], impact[i].social_user});
            }
        }
        add_row("altmetric", "altmetric_score", metric, pairs);
    }

    // altmetric vs raw attention counts
    for (const char* metric : {"tweet_count", "user_count"}) {
        std::vector<Pair> pairs;
        for (std::size_t i = 0; i < impact.size(); ++i) {
            if (!altmetric[i] || !include(impact[i])) continue;
            const double y = std::string_view(metric) == "tweet_count"
                                 ? static_cast<double>(impact[i].tweet_count)
                                 : static_cast<double>(impact[i].user_count);
            pairs.push_back({*altmetric[i], y});
        }
        add_row("altmetric_counts", "altmetric_score", metric, pairs);
    }

    return rows;
}

}  // namespace commdiff
