#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "netpsych/association.hpp"

namespace netpsych {

struct GlassoOptions {
    double tol = 1e-5;      // outer loop: max elementwise change in W
    int max_iter = 1000;    // outer sweeps
    double inner_tol = 1e-7;
    int inner_max_iter = 2000;
};

// Solution of max log det(Theta) - tr(S Theta) - lambda * sum_{i!=j} |Theta_ij|.
// covariance_hat is the dual estimate W with W_ii = S_ii (unpenalized diagonal).
struct PrecisionEstimate {
    Eigen::MatrixXd precision;
    Eigen::MatrixXd covariance_hat;
    double lambda = 0.0;
    double ebic = 0.0;
    int n_nonzero_edges = 0;
    bool converged = false;
    int n_iter = 0;
    double duality_gap = 0.0;  // tr(S Theta) + lambda*||Theta||_1,off - p
};

PrecisionEstimate glasso_fit(const Eigen::MatrixXd& corr, double lambda,
                             const GlassoOptions& options = {});

// EBIC = -2 logLik + E log(n) + 4 E gamma log(p), with
// logLik = (n/2) (log det Theta - tr(S Theta) - p log(2 pi)) and E the number
// of nonzero upper-triangle edges.
double ebic_score(const Eigen::MatrixXd& s, const PrecisionEstimate& estimate,
                  long n, double gamma);

// Sparse partial-correlation network: weight_ij = -theta_ij /
// sqrt(theta_ii * theta_jj), zero diagonal.
struct PartialCorrelationNetwork {
    std::vector<std::string> nodes;
    Eigen::MatrixXd weights;
    double lambda_selected = 0.0;
    double ebic = 0.0;
    double gamma = 0.5;
    // Grid points where the edge count dropped as lambda decreased (the
    // lasso active set is not strictly monotone along the path).
    int path_monotonicity_violations = 0;

    Eigen::Index n_nodes() const { return weights.rows(); }
    int n_edges() const;
};

PartialCorrelationNetwork network_from_precision(const PrecisionEstimate& estimate,
                                                 std::vector<std::string> nodes);

struct LambdaGrid {
    int n_lambda = 100;
    double ratio = 0.01;  // lambda_min = ratio * lambda_max
};

// Fits the full log-spaced grid and returns the EBIC-minimizing network
// (ties resolved toward larger lambda). Throws NumericError if every fit
// fails.
PartialCorrelationNetwork select_lambda(const Eigen::MatrixXd& corr,
                                        std::vector<std::string> nodes, long n,
                                        double gamma = 0.5,
                                        const LambdaGrid& grid = {},
                                        const GlassoOptions& options = {});

}  // namespace netpsych
