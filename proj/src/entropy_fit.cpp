#include "netpsych/entropy_fit.hpp"

#include <cmath>

#include "netpsych/distributions.hpp"
#include "netpsych/rng.hpp"

namespace netpsych {

namespace {

// Shannon entropy of the cells of |m| normalized to sum 1.
double cell_entropy(const Eigen::MatrixXd& m) {
    double total = m.cwiseAbs().sum();
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double q = std::fabs(m(i, j)) / total;
            if (q > 0.0) h -= q * std::log(q);
        }
    }
    return h;
}

// Random structure with the same number (and size profile) of communities:
// a uniform random permutation of the fixed assignment. Keeping the size
// profile makes base and comparison exchangeable when the data carry no
// structure, so the test stays calibrated under the null.
std::vector<int> shuffled_partition(const std::vector<int>& assignment, Rng& rng) {
    std::vector<int> a = assignment;
    for (std::size_t i = a.size() - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(
            rng.uniform_int(static_cast<std::uint64_t>(i + 1)));
        std::swap(a[i], a[j]);
    }
    return a;
}

}  // namespace

TefiResult tefi(const Eigen::MatrixXd& corr, const std::vector<int>& assignment,
                const TefiOptions& options) {
    const Eigen::Index p = corr.rows();
    if (static_cast<Eigen::Index>(assignment.size()) != p) {
        throw NumericError("tefi: assignment does not cover the matrix");
    }
    int k = 0;
    for (int a : assignment) k = std::max(k, a);
    std::vector<std::vector<Eigen::Index>> groups(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < p; ++i) {
        int a = assignment[static_cast<std::size_t>(i)];
        if (a < 1 || a > k) throw NumericError("tefi: invalid community label");
        groups[static_cast<std::size_t>(a - 1)].push_back(i);
    }
    for (const auto& g : groups) {
        if (g.empty()) throw NumericError("tefi: empty community");
    }

    TefiResult result;
    result.n_communities = k;
    result.total_entropy = cell_entropy(corr);

    double mean_h = 0.0;
    for (const auto& g : groups) {
        Eigen::MatrixXd sub(static_cast<Eigen::Index>(g.size()),
                            static_cast<Eigen::Index>(g.size()));
        for (std::size_t a = 0; a < g.size(); ++a) {
            for (std::size_t b = 0; b < g.size(); ++b) {
                sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    corr(g[a], g[b]);
            }
        }
        mean_h += cell_entropy(sub);
    }
    mean_h /= static_cast<double>(k);
    result.mean_community_entropy = mean_h;
    result.tefi = (result.total_entropy - mean_h) -
                  options.penalty_weight * std::sqrt(static_cast<double>(k)) *
                      result.total_entropy;
    return result;
}

double welch_one_tailed_p(double mean_a, double sd_a, long n_a, double mean_b,
                          double sd_b, long n_b) {
    double va = sd_a * sd_a / n_a;
    double vb = sd_b * sd_b / n_b;
    if (va + vb <= 0.0) return mean_a < mean_b ? 0.0 : 1.0;
    double t = (mean_a - mean_b) / std::sqrt(va + vb);
    double df = (va + vb) * (va + vb) /
                (va * va / (n_a - 1.0) + vb * vb / (n_b - 1.0));
    // One-tailed: P(T <= t) under H0, small when mean_a << mean_b.
    return 1.0 - t_sf(t, df);
}

TefiComparison tefi_bootstrap_test(const LikertMatrix& m,
                                   const CommunityPartition& partition,
                                   int n_draws, std::uint64_t seed,
                                   CorrMethod method, const TefiOptions& options) {
    if (n_draws < 100) {
        throw ConfigError("tefi_bootstrap_test: need at least 100 draws");
    }
    const Eigen::Index n = m.n_respondents();

    std::vector<double> base, comparison;
    base.reserve(static_cast<std::size_t>(n_draws));
    comparison.reserve(static_cast<std::size_t>(n_draws));
    int failures = 0;
    for (int d = 0; d < n_draws; ++d) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(d)));
        LikertMatrix resampled = m;
        for (Eigen::Index r = 0; r < n; ++r) {
            Eigen::Index pick = static_cast<Eigen::Index>(
                rng.uniform_int(static_cast<std::uint64_t>(n)));
            resampled.values.row(r) = m.values.row(pick);
        }
        try {
            AssociationMatrix corr = association_matrix(resampled, method);
            Eigen::MatrixXd pd = nearest_positive_definite(corr.coefficients);
            base.push_back(tefi(pd, partition.assignment, options).tefi);
            std::vector<int> rand_part = shuffled_partition(partition.assignment, rng);
            comparison.push_back(tefi(pd, rand_part, options).tefi);
        } catch (const std::exception&) {
            ++failures;
            if (failures > n_draws / 10) {
                throw NumericError(
                    "tefi_bootstrap_test: more than 10% of draws failed");
            }
        }
    }

    auto mean_sd = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        double sd = v.size() > 1 ? std::sqrt(ss / (v.size() - 1.0)) : 0.0;
        return std::pair<double, double>(mean, sd);
    };

    TefiComparison out;
    out.n_draws = static_cast<int>(base.size());
    auto [bm, bs] = mean_sd(base);
    auto [cm, cs] = mean_sd(comparison);
    out.base_mean = bm;
    out.base_sd = bs;
    out.comparison_mean = cm;
    out.comparison_sd = cs;
    out.p_one_tailed = welch_one_tailed_p(bm, bs, static_cast<long>(base.size()),
                                          cm, cs,
                                          static_cast<long>(comparison.size()));
    return out;
}

}  // namespace netpsych
