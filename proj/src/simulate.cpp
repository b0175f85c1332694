#include "netpsych/simulate.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "netpsych/distributions.hpp"
#include "netpsych/rng.hpp"

namespace netpsych {

void GeneratorSpec::validate() const {
    const std::size_t p = loadings.size();
    if (p < 2) throw ConfigError("generator needs at least 2 items");
    if (item_factor.size() != p) throw ConfigError("item_factor size mismatch");
    if (!item_ids.empty() && item_ids.size() != p) {
        throw ConfigError("item_ids size mismatch");
    }
    if (n < 1) throw ConfigError("sample size must be positive");
    const int k = n_factors();
    if (k < 1 || factor_correlations.cols() != k) {
        throw ConfigError("factor_correlations must be square and non-empty");
    }
    for (int i = 0; i < k; ++i) {
        if (std::fabs(factor_correlations(i, i) - 1.0) > 1e-12) {
            throw ConfigError("factor_correlations must have unit diagonal");
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(factor_correlations);
    if (llt.info() != Eigen::Success) {
        throw ConfigError("factor_correlations must be positive definite");
    }
    for (std::size_t i = 0; i < p; ++i) {
        if (std::fabs(loadings[i]) >= 1.0) {
            throw ConfigError("|loading| must be < 1");
        }
        if (item_factor[i] < 0 || item_factor[i] >= k) {
            throw ConfigError("item_factor index out of range");
        }
    }
    if (!thresholds.empty()) {
        if (thresholds.size() != p) throw ConfigError("thresholds size mismatch");
        for (const auto& t : thresholds) {
            if (t.empty()) throw ConfigError("empty threshold list");
            for (std::size_t j = 1; j < t.size(); ++j) {
                if (!(t[j] > t[j - 1])) {
                    throw ConfigError("thresholds must be strictly increasing");
                }
            }
        }
    }
}

GeneratorSpec GeneratorSpec::simple(int n_factors, int items_per_factor, double loading,
                                    double between_corr, long n, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.factor_correlations =
        Eigen::MatrixXd::Constant(n_factors, n_factors, between_corr);
    spec.factor_correlations.diagonal().setOnes();
    for (int f = 0; f < n_factors; ++f) {
        for (int j = 0; j < items_per_factor; ++j) {
            spec.item_factor.push_back(f);
            spec.loadings.push_back(loading);
            spec.item_ids.push_back(
                "i" + std::to_string(f * items_per_factor + j + 1));
        }
    }
    spec.n = n;
    spec.seed = seed;
    return spec;
}

std::vector<double> equiprobable_thresholds(int n_categories) {
    std::vector<double> t;
    for (int j = 1; j < n_categories; ++j) {
        t.push_back(norm_quantile(static_cast<double>(j) / n_categories));
    }
    return t;
}

LikertMatrix generate(const GeneratorSpec& spec) {
    spec.validate();
    const std::size_t p = spec.loadings.size();
    const int k = spec.n_factors();

    std::vector<std::vector<double>> cuts = spec.thresholds;
    if (cuts.empty()) {
        cuts.assign(p, equiprobable_thresholds(5));
    }

    Eigen::LLT<Eigen::MatrixXd> llt(spec.factor_correlations);
    Eigen::MatrixXd chol = llt.matrixL();

    LikertMatrix m;
    m.item_ids = spec.item_ids;
    if (m.item_ids.empty()) {
        for (std::size_t i = 0; i < p; ++i) m.item_ids.push_back("i" + std::to_string(i + 1));
    }
    m.scale_min = 1;
    // Category counts may differ per item; the scale covers the widest one.
    std::size_t max_cats = 0;
    for (const auto& c : cuts) max_cats = std::max(max_cats, c.size() + 1);
    m.scale_max = static_cast<int>(max_cats);
    m.values.resize(spec.n, static_cast<Eigen::Index>(p));

    Rng rng(spec.seed);
    Eigen::VectorXd z(k), factors(k);
    for (long r = 0; r < spec.n; ++r) {
        for (int f = 0; f < k; ++f) z(f) = rng.normal();
        factors = chol * z;
        for (std::size_t i = 0; i < p; ++i) {
            double lam = spec.loadings[i];
            double y = lam * factors(spec.item_factor[i]) +
                       std::sqrt(1.0 - lam * lam) * rng.normal();
            int cat = 1;
            for (double cut : cuts[i]) {
                if (y > cut) ++cat;
            }
            m.values(r, static_cast<Eigen::Index>(i)) = cat;
        }
    }
    return m;
}

Eigen::MatrixXd implied_latent_correlation(const GeneratorSpec& spec) {
    const std::size_t p = spec.loadings.size();
    Eigen::MatrixXd r(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            if (i == j) {
                r(i, j) = 1.0;
            } else {
                r(i, j) = spec.loadings[i] * spec.loadings[j] *
                          spec.factor_correlations(spec.item_factor[i],
                                                   spec.item_factor[j]);
            }
        }
    }
    return r;
}

}  // namespace netpsych
