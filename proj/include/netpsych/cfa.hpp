#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "netpsych/likert.hpp"

namespace netpsych {

// Simple-structure factor model: every item loads on exactly one factor,
// factors have unit variance and free correlations.
struct FactorModelSpec {
    std::vector<std::string> factor_names;
    std::map<std::string, std::string> loading_pattern;  // item -> factor

    static FactorModelSpec from_allocation(const FactorAllocation& allocation);
    int free_parameter_count(int n_items) const;
};

struct CfaOptions {
    int max_iter = 1000;
    double grad_tol = 1e-6;
    double psi_floor = 1e-4;
    int n_starts = 3;
    std::uint64_t seed = 20240601;
};

struct CfaFit {
    std::vector<std::string> item_ids;
    std::map<std::string, double> loadings;
    std::map<std::string, double> residual_variances;
    std::vector<std::string> factor_names;
    Eigen::MatrixXd factor_correlations;
    double f_min = 0.0;
    double chi_square = 0.0;
    int df = 0;
    double p = 1.0;
    double cfi = 0.0;
    double rmsea = 0.0;
    double srmr = 0.0;
    double baseline_chi_square = 0.0;
    int baseline_df = 0;
    bool converged = false;
    bool heywood = false;
    long n = 0;
    Eigen::MatrixXd sigma_hat;  // model-implied covariance at the solution
};

// Internal model over a fixed covariance matrix; exposed so tests can check
// the analytic gradient against finite differences. The raw parameter vector
// is [loadings (p), residual variances (p), factor correlations (upper
// triangle, row-major)].
class CfaModel {
  public:
    CfaModel(Eigen::MatrixXd s, std::vector<int> item_factor, int n_factors);

    int n_items() const { return static_cast<int>(item_factor_.size()); }
    int n_factors() const { return n_factors_; }
    int n_parameters() const;

    // F_ML = log|Sigma| + tr(S Sigma^-1) - log|S| - p; +inf when Sigma (or
    // the factor correlation block) is not PD.
    double f_ml(const Eigen::VectorXd& theta) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& theta) const;
    Eigen::MatrixXd implied_sigma(const Eigen::VectorXd& theta) const;

    const Eigen::MatrixXd& s() const { return s_; }
    double log_det_s() const { return log_det_s_; }

  private:
    Eigen::MatrixXd s_;
    std::vector<int> item_factor_;
    int n_factors_ = 0;
    double log_det_s_ = 0.0;
};

// Maximum-likelihood CFA on the raw-score covariance matrix (divisor N-1).
CfaFit fit_cfa(const LikertMatrix& m, const FactorModelSpec& spec,
               const CfaOptions& options = {});

// Same, from a covariance matrix and sample size (items named by position in
// `item_ids`).
CfaFit fit_cfa_cov(const Eigen::MatrixXd& s, long n,
                   const std::vector<std::string>& item_ids,
                   const FactorModelSpec& spec, const CfaOptions& options = {});

// Independence-model fit: chi2 = (N-1) * (log|diag S| - log|S|),
// df = p(p-1)/2.
std::pair<double, int> baseline_model(const Eigen::MatrixXd& s, long n);

struct FitIndices {
    double cfi = 0.0;
    double rmsea = 0.0;
    double srmr = 0.0;
};

FitIndices fit_indices(double chi_square, int df, long n, double baseline_chi_square,
                       int baseline_df, const Eigen::MatrixXd& s,
                       const Eigen::MatrixXd& sigma_hat);

}  // namespace netpsych
