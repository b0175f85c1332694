#pragma once

// Independent brute-force oracles used by the unit and acceptance suites.
// Everything here deliberately avoids the library's fast paths: the glasso
// oracle is a proximal-gradient solver on the primal objective, community
// oracles enumerate partitions, and correlation oracles enumerate pairs.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "netpsych/rng.hpp"

namespace netpsych::oracles {

// Random correlation matrix with controlled off-diagonal scale, guaranteed PD.
inline Eigen::MatrixXd random_correlation(int p, Rng& rng, double scale = 0.5) {
    Eigen::MatrixXd g(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) g(i, j) = rng.normal();
    }
    Eigen::MatrixXd s = g * g.transpose() / static_cast<double>(p);
    s += Eigen::MatrixXd::Identity(p, p) * (0.5 / scale);
    Eigen::VectorXd d = s.diagonal().cwiseSqrt();
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) s(i, j) /= d(i) * d(j);
    }
    return s;
}

inline double glasso_objective(const Eigen::MatrixXd& s, const Eigen::MatrixXd& theta,
                               double lambda) {
    Eigen::LLT<Eigen::MatrixXd> llt(theta);
    if (llt.info() != Eigen::Success) return 1e300;
    double logdet = 0.0;
    Eigen::MatrixXd l = llt.matrixL();
    for (Eigen::Index i = 0; i < theta.rows(); ++i) logdet += 2.0 * std::log(l(i, i));
    double l1 = 0.0;
    for (Eigen::Index i = 0; i < theta.rows(); ++i) {
        for (Eigen::Index j = 0; j < theta.cols(); ++j) {
            if (i != j) l1 += std::fabs(theta(i, j));
        }
    }
    return -logdet + (s * theta).trace() + lambda * l1;
}

// Max KKT violation of the stationarity conditions with W = Theta^{-1}:
// diagonal W_ii = S_ii; nonzero off-diagonals W_ij - S_ij = lambda sign(Theta_ij);
// zero off-diagonals |W_ij - S_ij| <= lambda.
inline double glasso_kkt_residual(const Eigen::MatrixXd& s, const Eigen::MatrixXd& theta,
                                  double lambda) {
    Eigen::MatrixXd w = theta.inverse();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        for (Eigen::Index j = 0; j < s.cols(); ++j) {
            double diff = w(i, j) - s(i, j);
            double v;
            if (i == j) {
                v = std::fabs(diff);
            } else if (theta(i, j) != 0.0) {
                v = std::fabs(diff - lambda * (theta(i, j) > 0 ? 1.0 : -1.0));
            } else {
                v = std::max(std::fabs(diff) - lambda, 0.0);
            }
            worst = std::max(worst, v);
        }
    }
    return worst;
}

// Slow independent glasso: proximal gradient (ISTA) with backtracking on the
// primal objective. Accurate to ~1e-9 in objective for small p.
inline Eigen::MatrixXd slow_glasso(const Eigen::MatrixXd& s, double lambda,
                                   int max_iter = 200000, double tol = 1e-11) {
    const Eigen::Index p = s.rows();
    Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) theta(i, i) = 1.0 / s(i, i);
    auto l1_off = [p](const Eigen::MatrixXd& m) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < p; ++i) {
            for (Eigen::Index j = 0; j < p; ++j) {
                if (i != j) acc += std::fabs(m(i, j));
            }
        }
        return acc;
    };
    double t = 1.0;
    double f = glasso_objective(s, theta, lambda);
    for (int iter = 0; iter < max_iter; ++iter) {
        Eigen::MatrixXd grad = s - theta.inverse();
        Eigen::MatrixXd cand;
        double f_cand = 0.0;
        while (true) {
            cand = theta - t * grad;
            for (Eigen::Index i = 0; i < p; ++i) {
                for (Eigen::Index j = 0; j < p; ++j) {
                    if (i == j) continue;
                    double v = cand(i, j);
                    double thr = t * lambda;
                    cand(i, j) = v > thr ? v - thr : (v < -thr ? v + thr : 0.0);
                }
            }
            f_cand = glasso_objective(s, cand, lambda);
            // Backtrack on the majorizer of the smooth part (objective minus
            // the l1 term).
            Eigen::MatrixXd diff = cand - theta;
            double smooth_theta = f - lambda * l1_off(theta);
            double smooth_cand = f_cand - lambda * l1_off(cand);
            double bound = smooth_theta + (grad.array() * diff.array()).sum() +
                           diff.squaredNorm() / (2.0 * t);
            if (f_cand < 1e299 && smooth_cand <= bound + 1e-14) break;
            t *= 0.5;
            if (t < 1e-14) break;
        }
        double change = (cand - theta).cwiseAbs().maxCoeff();
        theta = cand;
        f = f_cand;
        if (change < tol) break;
        t *= 1.02;
    }
    return theta;
}

// All partitions of n items into exactly k nonempty unlabeled blocks,
// reported as 1-based assignment vectors. Usable up to n ~ 10.
inline std::vector<std::vector<int>> partitions_into_k(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> assign(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int i, int used) {
        if (i == n) {
            if (used == k) out.push_back(assign);
            return;
        }
        // Canonical form: item i may join blocks 1..used or open block used+1.
        for (int c = 1; c <= used && c <= k; ++c) {
            assign[static_cast<std::size_t>(i)] = c;
            rec(i + 1, used);
        }
        if (used < k) {
            assign[static_cast<std::size_t>(i)] = used + 1;
            rec(i + 1, used + 1);
        }
    };
    rec(0, 0);
    return out;
}

}  // namespace netpsych::oracles
