#include "netpsych/cfa.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>

#include "netpsych/association.hpp"
#include "netpsych/distributions.hpp"
#include "netpsych/rng.hpp"

namespace netpsych {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Unpacked {
    Eigen::VectorXd loadings;
    Eigen::VectorXd psi;
    Eigen::MatrixXd phi;
};

Unpacked unpack(const Eigen::VectorXd& theta, const std::vector<int>& item_factor,
                int n_factors) {
    const int p = static_cast<int>(item_factor.size());
    Unpacked u;
    u.loadings = theta.segment(0, p);
    u.psi = theta.segment(p, p);
    u.phi = Eigen::MatrixXd::Identity(n_factors, n_factors);
    int idx = 2 * p;
    for (int a = 0; a < n_factors; ++a) {
        for (int b = a + 1; b < n_factors; ++b) {
            u.phi(a, b) = u.phi(b, a) = theta(idx++);
        }
    }
    return u;
}

Eigen::MatrixXd lambda_matrix(const Eigen::VectorXd& loadings,
                              const std::vector<int>& item_factor, int n_factors) {
    Eigen::MatrixXd lambda =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(item_factor.size()), n_factors);
    for (std::size_t i = 0; i < item_factor.size(); ++i) {
        lambda(static_cast<Eigen::Index>(i), item_factor[i]) =
            loadings(static_cast<Eigen::Index>(i));
    }
    return lambda;
}

// Quasi-Newton (BFGS) minimizer with Armijo backtracking. The objective may
// return +inf outside the feasible region; the line search backs off.
struct BfgsResult {
    Eigen::VectorXd x;
    double f = 0.0;
    Eigen::VectorXd grad;
    bool converged = false;
    int n_iter = 0;
};

template <typename FuncF, typename FuncG>
BfgsResult bfgs(FuncF f, FuncG g, Eigen::VectorXd x0, int max_iter, double grad_tol) {
    const Eigen::Index n = x0.size();
    BfgsResult res;
    res.x = std::move(x0);
    res.f = f(res.x);
    if (!std::isfinite(res.f)) {
        throw NumericError("optimizer: infeasible starting point");
    }
    res.grad = g(res.x);
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);

    for (int iter = 0; iter < max_iter; ++iter) {
        res.n_iter = iter;
        if (res.grad.cwiseAbs().maxCoeff() <= grad_tol) {
            res.converged = true;
            return res;
        }
        Eigen::VectorXd dir = -h * res.grad;
        double slope = res.grad.dot(dir);
        if (slope >= 0.0) {  // reset a corrupted approximation
            h.setIdentity();
            dir = -res.grad;
            slope = res.grad.dot(dir);
        }
        double step = 1.0;
        double f_new = kInf;
        Eigen::VectorXd x_new;
        bool ok = false;
        for (int ls = 0; ls < 60; ++ls) {
            x_new = res.x + step * dir;
            f_new = f(x_new);
            if (std::isfinite(f_new) && f_new <= res.f + 1e-4 * step * slope) {
                ok = true;
                break;
            }
            step *= 0.5;
        }
        if (!ok) {
            // No descent along this direction at representable step sizes.
            res.converged = res.grad.cwiseAbs().maxCoeff() <= grad_tol * 10.0;
            return res;
        }
        Eigen::VectorXd grad_new = g(x_new);
        Eigen::VectorXd s = x_new - res.x;
        Eigen::VectorXd y = grad_new - res.grad;
        double sy = s.dot(y);
        if (sy > 1e-12) {
            Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
            Eigen::MatrixXd v = eye - (s * y.transpose()) / sy;
            h = v * h * v.transpose() + (s * s.transpose()) / sy;
        } else {
            h.setIdentity();
        }
        double f_change = res.f - f_new;
        res.x = std::move(x_new);
        res.f = f_new;
        res.grad = std::move(grad_new);
        if (f_change < 1e-13 * (1.0 + std::fabs(res.f))) {
            res.converged = res.grad.cwiseAbs().maxCoeff() <= grad_tol * 10.0;
            res.n_iter = iter + 1;
            return res;
        }
    }
    return res;
}

}  // namespace

FactorModelSpec FactorModelSpec::from_allocation(const FactorAllocation& allocation) {
    FactorModelSpec spec;
    spec.factor_names = allocation.factor_names;
    for (const auto& f : allocation.factor_names) {
        for (const auto& item : allocation.items_of(f)) {
            spec.loading_pattern[item] = f;
        }
    }
    return spec;
}

int FactorModelSpec::free_parameter_count(int n_items) const {
    int nf = static_cast<int>(factor_names.size());
    return 2 * n_items + nf * (nf - 1) / 2;
}

CfaModel::CfaModel(Eigen::MatrixXd s, std::vector<int> item_factor, int n_factors)
    : s_(std::move(s)), item_factor_(std::move(item_factor)), n_factors_(n_factors) {
    Eigen::LLT<Eigen::MatrixXd> llt(s_);
    if (llt.info() != Eigen::Success) {
        throw NumericError("cfa: sample covariance matrix is singular");
    }
    log_det_s_ = 0.0;
    Eigen::MatrixXd l = llt.matrixL();
    for (Eigen::Index i = 0; i < s_.rows(); ++i) log_det_s_ += 2.0 * std::log(l(i, i));
}

int CfaModel::n_parameters() const {
    return 2 * n_items() + n_factors_ * (n_factors_ - 1) / 2;
}

Eigen::MatrixXd CfaModel::implied_sigma(const Eigen::VectorXd& theta) const {
    Unpacked u = unpack(theta, item_factor_, n_factors_);
    Eigen::MatrixXd lambda = lambda_matrix(u.loadings, item_factor_, n_factors_);
    Eigen::MatrixXd sigma = lambda * u.phi * lambda.transpose();
    sigma.diagonal() += u.psi;
    return sigma;
}

double CfaModel::f_ml(const Eigen::VectorXd& theta) const {
    Unpacked u = unpack(theta, item_factor_, n_factors_);
    if ((u.psi.array() <= 0.0).any()) return kInf;
    Eigen::LLT<Eigen::MatrixXd> phi_llt(u.phi);
    if (phi_llt.info() != Eigen::Success) return kInf;
    Eigen::MatrixXd sigma = implied_sigma(theta);
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) return kInf;
    double log_det = 0.0;
    Eigen::MatrixXd l = llt.matrixL();
    for (Eigen::Index i = 0; i < sigma.rows(); ++i) log_det += 2.0 * std::log(l(i, i));
    Eigen::MatrixXd sigma_inv =
        llt.solve(Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols()));
    double f = log_det + (s_ * sigma_inv).trace() - log_det_s_ -
               static_cast<double>(s_.rows());
    return std::isfinite(f) ? f : kInf;
}

Eigen::VectorXd CfaModel::gradient(const Eigen::VectorXd& theta) const {
    const int p = n_items();
    Unpacked u = unpack(theta, item_factor_, n_factors_);
    Eigen::MatrixXd lambda = lambda_matrix(u.loadings, item_factor_, n_factors_);
    Eigen::MatrixXd sigma = implied_sigma(theta);
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw NumericError("cfa gradient: implied covariance not PD");
    }
    Eigen::MatrixXd sigma_inv =
        llt.solve(Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols()));
    Eigen::MatrixXd g = sigma_inv * (sigma - s_) * sigma_inv;

    Eigen::VectorXd grad(n_parameters());
    Eigen::MatrixXd glp = g * lambda * u.phi;          // p x nf
    Eigen::MatrixXd ltgl = lambda.transpose() * g * lambda;  // nf x nf
    for (int i = 0; i < p; ++i) {
        grad(i) = 2.0 * glp(i, item_factor_[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < p; ++i) grad(p + i) = g(i, i);
    int idx = 2 * p;
    for (int a = 0; a < n_factors_; ++a) {
        for (int b = a + 1; b < n_factors_; ++b) {
            grad(idx++) = 2.0 * ltgl(a, b);
        }
    }
    return grad;
}

std::pair<double, int> baseline_model(const Eigen::MatrixXd& s, long n) {
    const Eigen::Index p = s.rows();
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    if (llt.info() != Eigen::Success) {
        throw NumericError("baseline_model: singular covariance matrix");
    }
    double log_det_s = 0.0;
    Eigen::MatrixXd l = llt.matrixL();
    for (Eigen::Index i = 0; i < p; ++i) log_det_s += 2.0 * std::log(l(i, i));
    double log_det_diag = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) log_det_diag += std::log(s(i, i));
    double f_b = log_det_diag - log_det_s;
    int df_b = static_cast<int>(p * (p - 1) / 2);
    return {static_cast<double>(n - 1) * f_b, df_b};
}

FitIndices fit_indices(double chi_square, int df, long n, double baseline_chi_square,
                       int baseline_df, const Eigen::MatrixXd& s,
                       const Eigen::MatrixXd& sigma_hat) {
    FitIndices out;
    double excess = std::max(chi_square - df, 0.0);
    double baseline_excess = std::max(baseline_chi_square - baseline_df, 0.0);
    double denom = std::max(baseline_excess, excess);
    out.cfi = denom > 0.0 ? 1.0 - excess / denom : 1.0;
    out.rmsea = df > 0 ? std::sqrt(excess / (static_cast<double>(df) * (n - 1.0)))
                       : 0.0;

    const Eigen::Index p = s.rows();
    double ss = 0.0;
    long cells = 0;
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i; j < p; ++j) {
            double denom_ij = std::sqrt(s(i, i) * s(j, j));
            double resid = (s(i, j) - sigma_hat(i, j)) / denom_ij;
            ss += resid * resid;
            ++cells;
        }
    }
    out.srmr = std::sqrt(ss / static_cast<double>(cells));
    return out;
}

CfaFit fit_cfa_cov(const Eigen::MatrixXd& s, long n,
                   const std::vector<std::string>& item_ids,
                   const FactorModelSpec& spec, const CfaOptions& options) {
    const int p = static_cast<int>(item_ids.size());
    const int nf = static_cast<int>(spec.factor_names.size());
    if (n <= p) throw DataError("cfa: need more respondents than items");

    std::vector<int> item_factor(static_cast<std::size_t>(p), -1);
    for (int i = 0; i < p; ++i) {
        auto it = spec.loading_pattern.find(item_ids[static_cast<std::size_t>(i)]);
        if (it == spec.loading_pattern.end()) {
            throw ConfigError("cfa: item not covered by the model spec: " +
                              item_ids[static_cast<std::size_t>(i)]);
        }
        auto f = std::find(spec.factor_names.begin(), spec.factor_names.end(),
                           it->second);
        if (f == spec.factor_names.end()) {
            throw ConfigError("cfa: unknown factor in loading pattern: " + it->second);
        }
        item_factor[static_cast<std::size_t>(i)] =
            static_cast<int>(f - spec.factor_names.begin());
    }
    for (int f = 0; f < nf; ++f) {
        if (std::find(item_factor.begin(), item_factor.end(), f) == item_factor.end()) {
            throw ConfigError("cfa: factor without items: " +
                              spec.factor_names[static_cast<std::size_t>(f)]);
        }
    }

    CfaModel model(s, item_factor, nf);
    const double lb = options.psi_floor;
    const int n_phi = nf * (nf - 1) / 2;

    // The optimizer works on [loadings, log(psi - lb), phi]; raw-space
    // gradients are mapped through the chain rule.
    auto to_raw = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd theta = x;
        for (int i = 0; i < p; ++i) theta(p + i) = lb + std::exp(x(p + i));
        return theta;
    };
    auto f_obj = [&](const Eigen::VectorXd& x) { return model.f_ml(to_raw(x)); };
    auto g_obj = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd theta = to_raw(x);
        Eigen::VectorXd g = model.gradient(theta);
        for (int i = 0; i < p; ++i) g(p + i) *= theta(p + i) - lb;
        return g;
    };

    Rng rng(options.seed);
    BfgsResult best;
    bool have_best = false;
    for (int start = 0; start < std::max(1, options.n_starts); ++start) {
        Eigen::VectorXd x0(model.n_parameters());
        double lam0 = start == 0 ? 0.7 : (start == 1 ? 0.5 : 0.3 + 0.6 * rng.u01());
        for (int i = 0; i < p; ++i) {
            double sii = s(i, i);
            x0(i) = lam0 * std::sqrt(sii);
            double psi0 = std::max(sii * (1.0 - lam0 * lam0), 0.05 * sii);
            x0(p + i) = std::log(psi0 - lb);
        }
        for (int j = 0; j < n_phi; ++j) x0(2 * p + j) = 0.3;

        BfgsResult res;
        try {
            res = bfgs(f_obj, g_obj, x0, options.max_iter, options.grad_tol);
        } catch (const NumericError&) {
            continue;
        }
        if (!have_best || res.f < best.f) {
            best = res;
            have_best = true;
        }
    }
    if (!have_best) throw NumericError("cfa: every start failed");

    Eigen::VectorXd theta = to_raw(best.x);
    Unpacked u = unpack(theta, item_factor, nf);

    // Sign indeterminacy: flip any factor whose loadings sum negative, and
    // the matching rows/columns of Phi (leaves Sigma unchanged).
    for (int f = 0; f < nf; ++f) {
        double sum = 0.0;
        for (int i = 0; i < p; ++i) {
            if (item_factor[static_cast<std::size_t>(i)] == f) sum += u.loadings(i);
        }
        if (sum < 0.0) {
            for (int i = 0; i < p; ++i) {
                if (item_factor[static_cast<std::size_t>(i)] == f) {
                    u.loadings(i) = -u.loadings(i);
                    theta(i) = u.loadings(i);
                }
            }
            for (int g2 = 0; g2 < nf; ++g2) {
                if (g2 == f) continue;
                u.phi(f, g2) = -u.phi(f, g2);
                u.phi(g2, f) = -u.phi(g2, f);
            }
        }
    }
    {
        int idx = 2 * p;
        for (int a = 0; a < nf; ++a) {
            for (int b = a + 1; b < nf; ++b) theta(idx++) = u.phi(a, b);
        }
    }

    CfaFit fit;
    fit.item_ids = item_ids;
    fit.factor_names = spec.factor_names;
    fit.n = n;
    fit.converged = best.converged;
    for (int i = 0; i < p; ++i) {
        fit.loadings[item_ids[static_cast<std::size_t>(i)]] = u.loadings(i);
        fit.residual_variances[item_ids[static_cast<std::size_t>(i)]] = u.psi(i);
        if (u.psi(i) <= lb * (1.0 + 1e-3) + 1e-12) fit.heywood = true;
    }
    fit.factor_correlations = u.phi;
    fit.f_min = model.f_ml(theta);
    fit.chi_square = static_cast<double>(n - 1) * fit.f_min;
    fit.df = p * (p + 1) / 2 - model.n_parameters();
    fit.p = fit.df > 0 ? chi2_sf(fit.chi_square, static_cast<double>(fit.df)) : 1.0;
    fit.sigma_hat = model.implied_sigma(theta);

    auto [chi_b, df_b] = baseline_model(s, n);
    fit.baseline_chi_square = chi_b;
    fit.baseline_df = df_b;
    FitIndices fi = fit_indices(fit.chi_square, fit.df, n, chi_b, df_b, s, fit.sigma_hat);
    fit.cfi = fi.cfi;
    fit.rmsea = fi.rmsea;
    fit.srmr = fi.srmr;
    return fit;
}

CfaFit fit_cfa(const LikertMatrix& m, const FactorModelSpec& spec,
               const CfaOptions& options) {
    const Eigen::Index n = m.n_respondents();
    const Eigen::Index p = m.n_items();
    Eigen::MatrixXd x = m.as_double();
    Eigen::RowVectorXd mean = x.colwise().mean();
    Eigen::MatrixXd centered = x.rowwise() - mean;
    Eigen::MatrixXd s =
        centered.transpose() * centered / static_cast<double>(n - 1);
    (void)p;
    return fit_cfa_cov(s, n, m.item_ids, spec, options);
}

}  // namespace netpsych
