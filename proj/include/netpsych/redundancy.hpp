#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace netpsych {

// Weighted topological overlap on absolute network weights:
// wTO_ij = (sum_u |w_iu||w_ju| + |w_ij|) / (min(k_i, k_j) + 1 - |w_ij|)
// with k_i = sum_u |w_iu| and u ranging over nodes other than i and j.
Eigen::MatrixXd wto_matrix(const Eigen::MatrixXd& weights);

struct RedundantPair {
    std::string item_a;
    std::string item_b;
    double wto = 0.0;
};

struct RedundancyReport {
    // All flagged pairs (wto >= flag threshold), sorted descending by wto.
    std::vector<RedundantPair> pairs;
    double flag_threshold = 0.20;
    double conservative_threshold = 0.30;

    // Reporting bands: [0.30, inf), [0.25, 0.30), [0.20, 0.25).
    std::vector<RedundantPair> conservative() const;
    std::vector<RedundantPair> moderate() const;
    std::vector<RedundantPair> small_to_moderate() const;
};

RedundancyReport flag_redundant(const Eigen::MatrixXd& wto,
                                const std::vector<std::string>& items,
                                double flag_threshold = 0.20,
                                double conservative_threshold = 0.30);

}  // namespace netpsych
