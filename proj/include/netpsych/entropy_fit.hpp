#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "netpsych/association.hpp"
#include "netpsych/community.hpp"
#include "netpsych/likert.hpp"

namespace netpsych {

struct TefiOptions {
    // Weight of the sqrt(n_communities)-scaled total-entropy term.
    double penalty_weight = 1.0;
};

struct TefiResult {
    double tefi = 0.0;
    int n_communities = 0;
    double total_entropy = 0.0;
    double mean_community_entropy = 0.0;
};

// Entropy fit of a partition to a correlation matrix. Cells of the absolute
// matrix are normalized into a probability table; the total Shannon entropy
// H_T and the mean per-community submatrix entropy H_C are combined as
//   TEFI = (H_T - mean H_C) - penalty_weight * sqrt(k) * H_T.
// Lower is better: for block-diagonal matrices the generating partition
// maximizes the mean community entropy among same-count partitions.
TefiResult tefi(const Eigen::MatrixXd& corr, const std::vector<int>& assignment,
                const TefiOptions& options = {});

struct TefiComparison {
    double base_mean = 0.0;
    double base_sd = 0.0;
    double comparison_mean = 0.0;
    double comparison_sd = 0.0;
    double p_one_tailed = 1.0;
    int n_draws = 0;
};

// Bootstrap test of the fitted structure against random structures with the
// same number of communities: per draw, rows are resampled with replacement,
// the correlation matrix is re-estimated (and PD-repaired), and TEFI is
// computed once with the fixed partition and once with a random permutation
// of it (same community count and sizes, which keeps the test calibrated on
// structure-free data). One-tailed Welch t for base < comparison.
TefiComparison tefi_bootstrap_test(const LikertMatrix& m,
                                   const CommunityPartition& partition,
                                   int n_draws, std::uint64_t seed,
                                   CorrMethod method = CorrMethod::kAuto,
                                   const TefiOptions& options = {});

// Welch two-sample t test, one-tailed for mean(a) < mean(b). Exposed for
// tests.
double welch_one_tailed_p(double mean_a, double sd_a, long n_a, double mean_b,
                          double sd_b, long n_b);

}  // namespace netpsych
