#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "netpsych/likert.hpp"

namespace netpsych {

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CorrMethod { kKendallTauB, kSpearman, kPearson, kPolychoric, kAuto };

std::string to_string(CorrMethod m);
CorrMethod corr_method_from_string(const std::string& s);

struct CorrResult {
    double coefficient = 0.0;
    double p = 1.0;
};

// Kendall tau-b with tie correction; two-sided p from the normal
// approximation with the tie-corrected variance of S = C - D.
CorrResult kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y);

CorrResult pearson(const std::vector<double>& x, const std::vector<double>& y);

// Average-rank Spearman correlation, p from the t approximation.
CorrResult spearman(const std::vector<double>& x, const std::vector<double>& y);

struct PolychoricOptions {
    double rho_bound = 0.999;
    double tol = 1e-6;
    int max_iter = 200;
};

// Two-step polychoric estimate: thresholds from marginal cumulative
// proportions, then rho by maximizing the bivariate-normal likelihood of the
// contingency table (bounded Brent search).
double polychoric(const std::vector<int>& x, const std::vector<int>& y,
                  const PolychoricOptions& options = {});

// Log-likelihood of the contingency table of (x, y) at a given rho, using
// thresholds from the marginals. Exposed for the likelihood-ratio p-value
// and for test oracles.
double polychoric_loglik(const std::vector<int>& x, const std::vector<int>& y,
                         double rho);

struct AssociationMatrix {
    Eigen::MatrixXd coefficients;  // symmetric, unit diagonal
    Eigen::MatrixXd p_values;      // symmetric, zero diagonal
    CorrMethod method = CorrMethod::kAuto;
    long n_used = 0;
    std::vector<std::string> item_ids;
};

// All pairwise associations. method = kAuto selects polychoric when both
// items show at most 7 observed categories, Pearson otherwise. Per-pair
// failures are rethrown annotated with the item identifiers.
AssociationMatrix association_matrix(const LikertMatrix& m, CorrMethod method);

// Closest-in-spirit positive definite repair: symmetrize, clip eigenvalues
// at `floor`, rescale to unit diagonal; iterated until the minimum
// eigenvalue is >= floor. PD inputs pass through unchanged.
Eigen::MatrixXd nearest_positive_definite(const Eigen::MatrixXd& m, double floor = 1e-6);

}  // namespace netpsych
