#include "netpsych/inferential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netpsych/association.hpp"
#include "netpsych/distributions.hpp"

namespace netpsych {

namespace {

struct PooledRanks {
    std::vector<std::vector<double>> ranks;  // per group
    double tie_sum = 0.0;                    // sum of t^3 - t over tie runs
    long n = 0;
};

PooledRanks pooled_ranks(const std::vector<std::vector<double>>& groups) {
    std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> pooled;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].empty()) throw NumericError("rank test: empty group");
        for (std::size_t i = 0; i < groups[g].size(); ++i) {
            pooled.push_back({groups[g][i], {g, i}});
        }
    }
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    PooledRanks out;
    out.n = static_cast<long>(pooled.size());
    out.ranks.resize(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        out.ranks[g].resize(groups[g].size());
    }
    std::size_t i = 0;
    while (i < pooled.size()) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j].first == pooled[i].first) ++j;
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        double t = static_cast<double>(j - i);
        out.tie_sum += t * t * t - t;
        for (std::size_t k = i; k < j; ++k) {
            auto [g, idx] = pooled[k].second;
            out.ranks[g][idx] = avg;
        }
        i = j;
    }
    return out;
}

}  // namespace

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
    const std::size_t k = groups.size();
    if (k < 2) throw NumericError("kruskal_wallis: need at least 2 groups");
    PooledRanks pr = pooled_ranks(groups);
    const double n = static_cast<double>(pr.n);

    TestResult result;
    result.test = "kruskal_wallis";
    result.df1 = static_cast<double>(k - 1);
    for (const auto& g : groups) result.group_sizes.push_back(static_cast<long>(g.size()));

    double tie_correction = 1.0 - pr.tie_sum / (n * n * n - n);
    if (tie_correction <= 0.0) {
        // Every pooled value identical: H is undefined; report no evidence.
        result.statistic = 0.0;
        result.p = 1.0;
        result.degenerate = true;
        return result;
    }

    double sum_term = 0.0;
    for (std::size_t g = 0; g < k; ++g) {
        double mean_rank = std::accumulate(pr.ranks[g].begin(), pr.ranks[g].end(), 0.0) /
                           static_cast<double>(pr.ranks[g].size());
        sum_term += static_cast<double>(pr.ranks[g].size()) * mean_rank * mean_rank;
    }
    double h = 12.0 / (n * (n + 1.0)) * sum_term - 3.0 * (n + 1.0);
    h /= tie_correction;
    result.statistic = h;
    result.p = chi2_sf(h, static_cast<double>(k - 1));
    return result;
}

std::vector<DunnResult> dunn_bonferroni(const std::vector<std::vector<double>>& groups) {
    const std::size_t k = groups.size();
    if (k < 2) throw NumericError("dunn_bonferroni: need at least 2 groups");
    PooledRanks pr = pooled_ranks(groups);
    const double n = static_cast<double>(pr.n);
    const double m_comparisons = static_cast<double>(k * (k - 1) / 2);

    std::vector<double> mean_rank(k);
    for (std::size_t g = 0; g < k; ++g) {
        mean_rank[g] = std::accumulate(pr.ranks[g].begin(), pr.ranks[g].end(), 0.0) /
                       static_cast<double>(pr.ranks[g].size());
    }
    // Tie-corrected variance term common to all pairs.
    double base_var = n * (n + 1.0) / 12.0 - pr.tie_sum / (12.0 * (n - 1.0));

    std::vector<DunnResult> out;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            DunnResult d;
            d.group_a = a;
            d.group_b = b;
            double se = std::sqrt(base_var * (1.0 / groups[a].size() +
                                              1.0 / groups[b].size()));
            if (se <= 0.0) {
                d.z = 0.0;
                d.p_unadjusted = 1.0;
            } else {
                d.z = (mean_rank[a] - mean_rank[b]) / se;
                d.p_unadjusted = 2.0 * norm_sf(std::fabs(d.z));
            }
            d.p_adjusted = std::min(1.0, d.p_unadjusted * m_comparisons);
            out.push_back(d);
        }
    }
    return out;
}

TestResult anova_oneway(const std::vector<std::vector<double>>& groups) {
    const std::size_t k = groups.size();
    if (k < 2) throw NumericError("anova_oneway: need at least 2 groups");
    long n = 0;
    for (const auto& g : groups) {
        if (g.size() < 2) throw NumericError("anova_oneway: each group needs >= 2 observations");
        n += static_cast<long>(g.size());
    }

    double grand = 0.0;
    for (const auto& g : groups) grand += std::accumulate(g.begin(), g.end(), 0.0);
    grand /= static_cast<double>(n);

    double ssb = 0.0, ssw = 0.0;
    for (const auto& g : groups) {
        double mean = std::accumulate(g.begin(), g.end(), 0.0) /
                      static_cast<double>(g.size());
        ssb += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
        for (double v : g) ssw += (v - mean) * (v - mean);
    }

    TestResult result;
    result.test = "anova_f";
    result.df1 = static_cast<double>(k - 1);
    result.df2 = static_cast<double>(n - static_cast<long>(k));
    for (const auto& g : groups) result.group_sizes.push_back(static_cast<long>(g.size()));

    if (ssw <= 0.0) {
        if (ssb <= 0.0) {
            result.statistic = 0.0;
            result.p = 1.0;
            result.degenerate = true;
            return result;
        }
        throw NumericError("anova_oneway: zero within-group variance in all groups");
    }
    double msb = ssb / result.df1;
    double msw = ssw / result.df2;
    result.statistic = msb / msw;
    result.p = f_sf(result.statistic, result.df1, result.df2);
    return result;
}

}  // namespace netpsych
