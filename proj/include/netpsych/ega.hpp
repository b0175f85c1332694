#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "netpsych/association.hpp"
#include "netpsych/community.hpp"
#include "netpsych/glasso.hpp"
#include "netpsych/likert.hpp"

namespace netpsych {

struct EgaConfig {
    CorrMethod method = CorrMethod::kAuto;
    double gamma = 0.5;
    LambdaGrid grid;
    int steps = 4;
    double pd_floor = 1e-6;
    GlassoOptions glasso;
};

struct EgaResult {
    PartialCorrelationNetwork network;
    CommunityPartition partition;
    AssociationMatrix correlations;
    EgaConfig config;

    // Items of each community, in item order; community index is 1-based.
    std::vector<std::vector<std::string>> community_items() const;
};

// Full EGA composition: association matrix -> PD repair -> EBIC-selected
// GLASSO network -> walktrap communities. Stage failures are rethrown with
// the stage name attached.
EgaResult run_ega(const LikertMatrix& m, const EgaConfig& config = {});

// Named factor sets from a partition ("F1", "F2", ...).
FactorAllocation allocation_from_partition(const CommunityPartition& partition,
                                           const std::vector<std::string>& items);

// Jaccard |A∩B| / |A∪B| for every factor pair (rows = a, cols = b). Both
// allocations must draw their items from the same universe.
Eigen::MatrixXd compare_partitions(const FactorAllocation& a,
                                   const FactorAllocation& b);

// Kendall tau matrix (with p-values) between the summed factor scores of two
// allocations; rows = a's factors, cols = b's factors.
struct FactorScoreCorrelogram {
    std::vector<std::string> row_factors;
    std::vector<std::string> col_factors;
    Eigen::MatrixXd tau;
    Eigen::MatrixXd p_values;
};

FactorScoreCorrelogram factor_score_correlogram(const LikertMatrix& m,
                                                const FactorAllocation& a,
                                                const FactorAllocation& b);

}  // namespace netpsych
