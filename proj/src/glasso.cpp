#include "netpsych/glasso.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace netpsych {

namespace {

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

// Lasso subproblem min 1/2 b' W11 b - b's12 + lambda |b|_1 by cyclic
// coordinate descent, warm-started at b.
void lasso_cd(const Eigen::MatrixXd& w11, const Eigen::VectorXd& s12, double lambda,
              Eigen::VectorXd& b, double tol, int max_iter) {
    const Eigen::Index q = s12.size();
    for (int it = 0; it < max_iter; ++it) {
        double max_change = 0.0;
        for (Eigen::Index k = 0; k < q; ++k) {
            double grad_rest = s12(k) - w11.row(k).dot(b) + w11(k, k) * b(k);
            double nb = soft_threshold(grad_rest, lambda) / w11(k, k);
            max_change = std::max(max_change, std::fabs(nb - b(k)));
            b(k) = nb;
        }
        if (max_change < tol) break;
    }
}

}  // namespace

int PartialCorrelationNetwork::n_edges() const {
    int e = 0;
    for (Eigen::Index i = 0; i < weights.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < weights.cols(); ++j) {
            if (weights(i, j) != 0.0) ++e;
        }
    }
    return e;
}

PrecisionEstimate glasso_fit(const Eigen::MatrixXd& s, double lambda,
                             const GlassoOptions& options) {
    const Eigen::Index p = s.rows();
    if (s.cols() != p) throw NumericError("glasso: matrix must be square");
    if (lambda < 0.0) throw NumericError("glasso: lambda must be >= 0");
    {
        Eigen::LLT<Eigen::MatrixXd> llt(s);
        if (llt.info() != Eigen::Success) {
            throw NumericError("glasso: input matrix is not positive definite");
        }
    }

    PrecisionEstimate est;
    est.lambda = lambda;

    if (p == 1) {
        est.precision = Eigen::MatrixXd::Constant(1, 1, 1.0 / s(0, 0));
        est.covariance_hat = s;
        est.converged = true;
        return est;
    }

    // W tracks the working covariance; the diagonal is unpenalized so it
    // stays at S_ii throughout. B holds the per-column lasso coefficients.
    Eigen::MatrixXd w = s;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p - 1, p);
    const double offdiag_scale = [&] {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < p; ++i) {
            for (Eigen::Index j = 0; j < p; ++j) {
                if (i != j) acc += std::fabs(s(i, j));
            }
        }
        return std::max(acc / static_cast<double>(p * (p - 1)), 1e-12);
    }();

    Eigen::MatrixXd w11(p - 1, p - 1);
    Eigen::VectorXd s12(p - 1), w12(p - 1);
    int iter = 0;
    bool converged = false;
    for (; iter < options.max_iter; ++iter) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            // Partition out row/column j.
            Eigen::Index r = 0;
            for (Eigen::Index i = 0; i < p; ++i) {
                if (i == j) continue;
                Eigen::Index c = 0;
                for (Eigen::Index k = 0; k < p; ++k) {
                    if (k == j) continue;
                    w11(r, c) = w(i, k);
                    ++c;
                }
                s12(r) = s(i, j);
                ++r;
            }
            Eigen::VectorXd bj = b.col(j);
            lasso_cd(w11, s12, lambda, bj, options.inner_tol * offdiag_scale,
                     options.inner_max_iter);
            b.col(j) = bj;
            w12 = w11 * bj;
            r = 0;
            for (Eigen::Index i = 0; i < p; ++i) {
                if (i == j) continue;
                max_change = std::max(max_change, std::fabs(w(i, j) - w12(r)));
                w(i, j) = w12(r);
                w(j, i) = w12(r);
                ++r;
            }
        }
        if (max_change < options.tol * offdiag_scale) {
            converged = true;
            ++iter;
            break;
        }
    }

    // Recover Theta from the final (W, B): theta_jj = 1/(w_jj - w12'b),
    // theta_12 = -b * theta_jj. Exact zeros in b give exact zeros in Theta.
    Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        Eigen::Index r = 0;
        double dot = 0.0;
        for (Eigen::Index i = 0; i < p; ++i) {
            if (i == j) continue;
            dot += w(i, j) * b(r, j);
            ++r;
        }
        double theta_jj = 1.0 / (w(j, j) - dot);
        theta(j, j) = theta_jj;
        r = 0;
        for (Eigen::Index i = 0; i < p; ++i) {
            if (i == j) continue;
            if (b(r, j) != 0.0) {
                theta(i, j) = -b(r, j) * theta_jj;
            }
            ++r;
        }
    }
    // Exact symmetrization; keep the sparsity pattern symmetric by zeroing
    // any half-pattern disagreement (possible only at convergence slack).
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i + 1; j < p; ++j) {
            if (theta(i, j) == 0.0 || theta(j, i) == 0.0) {
                theta(i, j) = theta(j, i) = 0.0;
            } else {
                double v = 0.5 * (theta(i, j) + theta(j, i));
                theta(i, j) = theta(j, i) = v;
            }
        }
    }

    est.precision = theta;
    est.covariance_hat = w;
    est.converged = converged;
    est.n_iter = iter;
    est.n_nonzero_edges = 0;
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i + 1; j < p; ++j) {
            if (theta(i, j) != 0.0) ++est.n_nonzero_edges;
        }
    }
    double l1_off = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            if (i != j) l1_off += std::fabs(theta(i, j));
        }
    }
    est.duality_gap = (s * theta).trace() + lambda * l1_off - static_cast<double>(p);
    if (!converged) {
        throw NumericError("glasso: no convergence after " +
                           std::to_string(options.max_iter) +
                           " sweeps (duality gap " + std::to_string(est.duality_gap) +
                           ")");
    }
    return est;
}

double ebic_score(const Eigen::MatrixXd& s, const PrecisionEstimate& estimate,
                  long n, double gamma) {
    const Eigen::Index p = s.rows();
    Eigen::LLT<Eigen::MatrixXd> llt(estimate.precision);
    if (llt.info() != Eigen::Success) {
        throw NumericError("ebic: precision estimate is not positive definite");
    }
    double logdet = 0.0;
    Eigen::MatrixXd l = llt.matrixL();
    for (Eigen::Index i = 0; i < p; ++i) logdet += 2.0 * std::log(l(i, i));
    double loglik = 0.5 * n *
                    (logdet - (s * estimate.precision).trace() -
                     p * std::log(2.0 * M_PI));
    double e = static_cast<double>(estimate.n_nonzero_edges);
    return -2.0 * loglik + e * std::log(static_cast<double>(n)) +
           4.0 * e * gamma * std::log(static_cast<double>(p));
}

PartialCorrelationNetwork network_from_precision(const PrecisionEstimate& estimate,
                                                 std::vector<std::string> nodes) {
    const Eigen::Index p = estimate.precision.rows();
    PartialCorrelationNetwork net;
    net.nodes = std::move(nodes);
    net.lambda_selected = estimate.lambda;
    net.ebic = estimate.ebic;
    net.weights = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            if (i != j && estimate.precision(i, j) != 0.0) {
                net.weights(i, j) = -estimate.precision(i, j) /
                                    std::sqrt(estimate.precision(i, i) *
                                              estimate.precision(j, j));
            }
        }
    }
    return net;
}

PartialCorrelationNetwork select_lambda(const Eigen::MatrixXd& corr,
                                        std::vector<std::string> nodes, long n,
                                        double gamma, const LambdaGrid& grid,
                                        const GlassoOptions& options) {
    const Eigen::Index p = corr.rows();
    double lambda_max = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i + 1; j < p; ++j) {
            lambda_max = std::max(lambda_max, std::fabs(corr(i, j)));
        }
    }
    if (lambda_max == 0.0) lambda_max = 1e-4;  // identity input: any grid is empty

    const double lambda_min = lambda_max * grid.ratio;
    std::vector<double> lambdas;
    for (int i = 0; i < grid.n_lambda; ++i) {
        double t = grid.n_lambda == 1
                       ? 0.0
                       : static_cast<double>(i) / (grid.n_lambda - 1);
        lambdas.push_back(std::exp(std::log(lambda_max) +
                                   t * (std::log(lambda_min) - std::log(lambda_max))));
    }

    bool any_ok = false;
    std::string last_error;
    double best_ebic = 0.0;
    PrecisionEstimate best;
    int prev_edges = -1;
    int monotonicity_violations = 0;
    // Grid runs from the sparsest (lambda_max) downward; ties in EBIC keep
    // the earlier (sparser) fit.
    for (double lambda : lambdas) {
        PrecisionEstimate est;
        try {
            est = glasso_fit(corr, lambda, options);
        } catch (const std::exception& e) {
            last_error = e.what();
            continue;
        }
        est.ebic = ebic_score(corr, est, n, gamma);
        // The lasso active set is not strictly monotone along the path:
        // small coefficients can exit as lambda decreases. Track it as a
        // diagnostic rather than failing the run.
        if (prev_edges >= 0 && est.n_nonzero_edges < prev_edges) {
            ++monotonicity_violations;
        }
        prev_edges = est.n_nonzero_edges;
        if (!any_ok || est.ebic < best_ebic - 1e-12) {
            best = est;
            best_ebic = est.ebic;
            any_ok = true;
        }
    }
    if (!any_ok) {
        throw NumericError("glasso path: every grid fit failed: " + last_error);
    }
    PartialCorrelationNetwork net = network_from_precision(best, std::move(nodes));
    net.gamma = gamma;
    net.path_monotonicity_violations = monotonicity_violations;
    return net;
}

}  // namespace netpsych
