#pragma once

#include <string>
#include <vector>

namespace netpsych {

struct TestResult {
    double statistic = 0.0;
    double p = 1.0;
    std::string test;
    std::vector<std::string> groups;
    std::vector<long> group_sizes;
    double df1 = 0.0;
    double df2 = 0.0;
    bool degenerate = false;  // all values identical across groups
};

struct DunnResult {
    std::size_t group_a = 0;
    std::size_t group_b = 0;
    double z = 0.0;
    double p_unadjusted = 1.0;
    double p_adjusted = 1.0;  // Bonferroni, clamped at 1
};

// Kruskal-Wallis H with tie correction; p from chi-square with k-1 df.
// All-identical pooled data yields statistic 0, p 1, degenerate flag.
TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

// Pairwise Dunn z tests on mean ranks with tie-corrected pooled variance;
// Bonferroni-adjusted p values.
std::vector<DunnResult> dunn_bonferroni(const std::vector<std::vector<double>>& groups);

// One-way ANOVA F test.
TestResult anova_oneway(const std::vector<std::vector<double>>& groups);

}  // namespace netpsych
