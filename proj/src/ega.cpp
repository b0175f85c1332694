#include "netpsych/ega.hpp"

#include <algorithm>
#include <set>

namespace netpsych {

std::vector<std::vector<std::string>> EgaResult::community_items() const {
    std::vector<std::vector<std::string>> groups(
        static_cast<std::size_t>(partition.n_communities));
    for (std::size_t i = 0; i < partition.assignment.size(); ++i) {
        groups[static_cast<std::size_t>(partition.assignment[i] - 1)].push_back(
            network.nodes[i]);
    }
    return groups;
}

EgaResult run_ega(const LikertMatrix& m, const EgaConfig& config) {
    if (m.n_items() < 3) throw DataError("run_ega: need at least 3 items");

    EgaResult result;
    result.config = config;
    try {
        result.correlations = association_matrix(m, config.method);
    } catch (const std::exception& e) {
        throw NumericError(std::string("ega[correlation]: ") + e.what());
    }
    Eigen::MatrixXd pd;
    try {
        pd = nearest_positive_definite(result.correlations.coefficients,
                                       config.pd_floor);
    } catch (const std::exception& e) {
        throw NumericError(std::string("ega[pd-repair]: ") + e.what());
    }
    try {
        result.network = select_lambda(pd, m.item_ids, m.n_respondents(),
                                       config.gamma, config.grid, config.glasso);
    } catch (const std::exception& e) {
        throw NumericError(std::string("ega[glasso]: ") + e.what());
    }
    try {
        result.partition = walktrap(result.network.weights, config.steps);
    } catch (const std::exception& e) {
        throw NumericError(std::string("ega[community]: ") + e.what());
    }
    return result;
}

FactorAllocation allocation_from_partition(const CommunityPartition& partition,
                                           const std::vector<std::string>& items) {
    if (partition.assignment.size() != items.size()) {
        throw DataError("allocation_from_partition: size mismatch");
    }
    FactorAllocation alloc;
    for (int c = 1; c <= partition.n_communities; ++c) {
        std::vector<std::string> members;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (partition.assignment[i] == c) members.push_back(items[i]);
        }
        alloc.add("F" + std::to_string(c), std::move(members));
    }
    return alloc;
}

Eigen::MatrixXd compare_partitions(const FactorAllocation& a,
                                   const FactorAllocation& b) {
    std::set<std::string> universe_a, universe_b;
    for (const auto& f : a.factor_names) {
        for (const auto& item : a.items_of(f)) universe_a.insert(item);
    }
    for (const auto& f : b.factor_names) {
        for (const auto& item : b.items_of(f)) universe_b.insert(item);
    }
    if (universe_a != universe_b) {
        throw DataError("compare_partitions: item universes differ");
    }

    Eigen::MatrixXd j(static_cast<Eigen::Index>(a.n_factors()),
                      static_cast<Eigen::Index>(b.n_factors()));
    for (std::size_t i = 0; i < a.factor_names.size(); ++i) {
        std::set<std::string> sa(a.items_of(a.factor_names[i]).begin(),
                                 a.items_of(a.factor_names[i]).end());
        for (std::size_t k = 0; k < b.factor_names.size(); ++k) {
            std::set<std::string> sb(b.items_of(b.factor_names[k]).begin(),
                                     b.items_of(b.factor_names[k]).end());
            std::vector<std::string> inter, uni;
            std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                                  std::back_inserter(inter));
            std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(),
                           std::back_inserter(uni));
            j(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                uni.empty() ? 0.0
                            : static_cast<double>(inter.size()) /
                                  static_cast<double>(uni.size());
        }
    }
    return j;
}

FactorScoreCorrelogram factor_score_correlogram(const LikertMatrix& m,
                                                const FactorAllocation& a,
                                                const FactorAllocation& b) {
    Eigen::MatrixXd scores_a = factor_scores(m, a);
    Eigen::MatrixXd scores_b = factor_scores(m, b);
    FactorScoreCorrelogram out;
    out.row_factors = a.factor_names;
    out.col_factors = b.factor_names;
    out.tau.resize(scores_a.cols(), scores_b.cols());
    out.p_values.resize(scores_a.cols(), scores_b.cols());
    for (Eigen::Index i = 0; i < scores_a.cols(); ++i) {
        std::vector<double> x(scores_a.col(i).data(),
                              scores_a.col(i).data() + scores_a.rows());
        for (Eigen::Index j = 0; j < scores_b.cols(); ++j) {
            std::vector<double> y(scores_b.col(j).data(),
                                  scores_b.col(j).data() + scores_b.rows());
            CorrResult r = kendall_tau_b(x, y);
            out.tau(i, j) = r.coefficient;
            out.p_values(i, j) = r.p;
        }
    }
    return out;
}

}  // namespace netpsych
