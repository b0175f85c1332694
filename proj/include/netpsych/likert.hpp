#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace netpsych {

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Validated Likert response matrix (respondents x items). Immutable after
// load; every cell lies in [scale_min, scale_max].
struct LikertMatrix {
    Eigen::MatrixXi values;
    std::vector<std::string> item_ids;
    int scale_min = 1;
    int scale_max = 5;
    std::vector<std::string> cohorts;  // empty, or one label per respondent

    Eigen::Index n_respondents() const { return values.rows(); }
    Eigen::Index n_items() const { return values.cols(); }
    bool has_cohorts() const { return !cohorts.empty(); }

    // Column index of an item id; throws DataError if unknown.
    Eigen::Index item_index(const std::string& id) const;

    // Enforces the type invariants; throws DataError on violation.
    void validate() const;

    // Respondent rows as doubles (for covariance / correlation work).
    Eigen::MatrixXd as_double() const { return values.cast<double>(); }
};

struct ItemDescriptives {
    std::string item_id;
    double mean = 0.0;
    double sd = 0.0;  // divisor n-1
    double median = 0.0;
    int min = 0;
    int max = 0;
    long n = 0;
};

struct CohortSummary {
    std::string cohort_label;
    long n = 0;
    std::vector<double> item_means;                // aligned with item_ids
    std::map<std::string, double> factor_means;    // factor -> mean of per-respondent item means
};

// Named factor sets over item ids (insertion-ordered).
struct FactorAllocation {
    std::vector<std::string> factor_names;
    std::map<std::string, std::vector<std::string>> items;

    void add(const std::string& factor, std::vector<std::string> item_list);
    const std::vector<std::string>& items_of(const std::string& factor) const;
    std::size_t n_factors() const { return factor_names.size(); }
};

struct LoadOptions {
    enum class MissingPolicy { kListwiseDelete, kStrict };

    std::vector<std::string> item_columns;  // explicit list wins over prefix
    std::string item_prefix;                // else: columns starting with prefix
    std::string cohort_column;              // optional
    int scale_min = 1;
    int scale_max = 5;
    MissingPolicy missing = MissingPolicy::kListwiseDelete;
};

struct LoadReport {
    long n_rows_read = 0;
    long n_rows_kept = 0;
    long n_rows_dropped = 0;
    std::vector<long> dropped_rows;  // 0-based data-row indices
    // item -> count per category (index 0 = scale_min)
    std::map<std::string, std::vector<long>> histograms;
};

// Reads a UTF-8, comma-separated file with a header row. Item columns are
// selected per options (explicit list > prefix > all non-cohort columns).
// Rows with missing / out-of-range / non-integer cells are dropped under the
// listwise policy and recorded in the report; strict mode throws instead.
LikertMatrix load_csv(const std::string& path, const LoadOptions& options = {},
                      LoadReport* report = nullptr);

// Writes the canonical CSV form consumed by load_csv (round-trip identity).
void write_csv(const LikertMatrix& m, const std::string& path,
               const std::string& cohort_column = "cohort");

std::vector<ItemDescriptives> describe(const LikertMatrix& m);

// Per-respondent summed scores per factor; columns follow allocation order.
Eigen::MatrixXd factor_scores(const LikertMatrix& m, const FactorAllocation& allocation);

// Per-cohort summaries: per-item means plus, per factor, the mean over
// respondents of the respondent's mean item score on that factor.
std::vector<CohortSummary> cohort_summaries(const LikertMatrix& m,
                                            const FactorAllocation& allocation);

}  // namespace netpsych
