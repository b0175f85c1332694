#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "netpsych/association.hpp"

namespace netpsych {

// Assignment of nodes to communities; indices are 1-based and contiguous.
struct CommunityPartition {
    std::vector<int> assignment;
    int n_communities = 0;
    double modularity = 0.0;

    void renumber();  // makes labels contiguous from 1, by first appearance
};

// Weighted Newman modularity over absolute edge weights.
double modularity(const Eigen::MatrixXd& weights, const std::vector<int>& assignment);

// Pons-Latapy random-walk agglomeration; the returned partition is the
// merge-tree cut maximizing modularity. Edge weights enter as |w|; isolated
// nodes stay singletons.
CommunityPartition walktrap(const Eigen::MatrixXd& weights, int steps = 4);

// Same merge tree, cut at exactly `target_k` communities when the tree
// reaches that count (it always does for target_k between the number of
// connected components and n); otherwise the closest achievable cut.
CommunityPartition walktrap_cut(const Eigen::MatrixXd& weights, int steps,
                                int target_k);

// Greedy modularity optimization with resolution parameter; deterministic
// under the fixed ascending node order.
CommunityPartition louvain(const Eigen::MatrixXd& weights, double resolution = 1.0);

}  // namespace netpsych
