#pragma once

#include <string>
#include <vector>

#include "netpsych/association.hpp"
#include "netpsych/boot.hpp"
#include "netpsych/cfa.hpp"
#include "netpsych/ega.hpp"
#include "netpsych/entropy_fit.hpp"
#include "netpsych/glasso.hpp"
#include "netpsych/inferential.hpp"
#include "netpsych/likert.hpp"
#include "netpsych/redundancy.hpp"

namespace netpsych {

// All JSON emitters produce deterministic, sorted-key documents.
std::string to_json(const LoadReport& report);
std::string to_json(const std::vector<ItemDescriptives>& descriptives);
std::string to_json(const AssociationMatrix& matrix);
std::string to_json(const PartialCorrelationNetwork& network);
std::string partition_json(const CommunityPartition& partition,
                           const std::vector<std::string>& items);
std::string jaccard_json(const Eigen::MatrixXd& jaccard,
                         const std::vector<std::string>& rows,
                         const std::vector<std::string>& cols);
std::string to_json(const BootstrapResult& result);
std::string to_json(const TefiComparison& comparison);
std::string to_json(const CfaFit& fit);
std::string to_json(const TestResult& result);
std::string tests_json(const std::vector<TestResult>& kw,
                       const std::vector<TestResult>& anova,
                       const std::vector<std::vector<DunnResult>>& dunn,
                       const std::vector<std::string>& labels,
                       const std::vector<std::vector<std::string>>& group_names);
std::string to_json(const RedundancyReport& report);
std::string redundancy_markdown(const RedundancyReport& report);

// Graph exports.
std::string to_dot(const PartialCorrelationNetwork& network,
                   const CommunityPartition* partition = nullptr);
std::string to_graphml(const PartialCorrelationNetwork& network);

// SVG figures (no timestamps; byte-stable for fixed inputs).
std::string svg_correlogram(const AssociationMatrix& matrix, double alpha = 0.05);
std::string svg_correlogram(const Eigen::MatrixXd& coefficients,
                            const Eigen::MatrixXd& p_values,
                            const std::vector<std::string>& row_labels,
                            const std::vector<std::string>& col_labels,
                            double alpha = 0.05);
// One box per (group, series) pair: series are drawn side by side per group.
struct BoxSeries {
    std::string label;
    std::vector<std::vector<double>> groups;  // values per group
};
std::string svg_boxplot(const std::vector<std::string>& group_labels,
                        const std::vector<BoxSeries>& series,
                        const std::string& y_label);
std::string svg_stability_bars(const BootstrapResult& result);

void write_text_file(const std::string& path, const std::string& content);
std::string sha256_hex(const std::string& data);

}  // namespace netpsych
