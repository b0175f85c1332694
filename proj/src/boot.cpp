#include "netpsych/boot.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "netpsych/distributions.hpp"
#include "netpsych/rng.hpp"

namespace netpsych {

namespace {

std::vector<std::vector<std::size_t>> partition_groups(const CommunityPartition& p) {
    std::vector<std::vector<std::size_t>> groups(
        static_cast<std::size_t>(p.n_communities));
    for (std::size_t i = 0; i < p.assignment.size(); ++i) {
        groups[static_cast<std::size_t>(p.assignment[i] - 1)].push_back(i);
    }
    return groups;
}

double jaccard(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::size_t inter = 0;
    std::size_t ai = 0, bi = 0;
    while (ai < a.size() && bi < b.size()) {
        if (a[ai] == b[bi]) { ++inter; ++ai; ++bi; }
        else if (a[ai] < b[bi]) ++ai;
        else ++bi;
    }
    std::size_t uni = a.size() + b.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

LikertMatrix resample_rows(const LikertMatrix& m, Rng& rng) {
    LikertMatrix out = m;
    const Eigen::Index n = m.n_respondents();
    for (Eigen::Index r = 0; r < n; ++r) {
        Eigen::Index pick = static_cast<Eigen::Index>(
            rng.uniform_int(static_cast<std::uint64_t>(n)));
        out.values.row(r) = m.values.row(pick);
        if (m.has_cohorts()) {
            out.cohorts[static_cast<std::size_t>(r)] =
                m.cohorts[static_cast<std::size_t>(pick)];
        }
    }
    return out;
}

// Parametric draw: multivariate normal from the model covariance, cut at
// the observed marginal thresholds of each item.
struct ParametricModel {
    Eigen::MatrixXd chol;                       // of the model correlation
    std::vector<std::vector<double>> thresholds;  // per item
    int scale_min = 1, scale_max = 5;
    std::vector<std::string> item_ids;
};

ParametricModel build_parametric_model(const LikertMatrix& m, const EgaResult& full) {
    ParametricModel pm;
    pm.item_ids = m.item_ids;
    pm.scale_min = m.scale_min;
    pm.scale_max = m.scale_max;

    Eigen::MatrixXd pd =
        nearest_positive_definite(full.correlations.coefficients, full.config.pd_floor);
    PrecisionEstimate refit =
        glasso_fit(pd, full.network.lambda_selected, full.config.glasso);
    Eigen::MatrixXd sigma = refit.covariance_hat;
    Eigen::VectorXd d = sigma.diagonal().cwiseSqrt();
    for (Eigen::Index i = 0; i < sigma.rows(); ++i) {
        for (Eigen::Index j = 0; j < sigma.cols(); ++j) {
            sigma(i, j) /= d(i) * d(j);
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(nearest_positive_definite(sigma));
    pm.chol = llt.matrixL();

    const double n = static_cast<double>(m.n_respondents());
    for (Eigen::Index c = 0; c < m.n_items(); ++c) {
        std::vector<long> counts(static_cast<std::size_t>(m.scale_max - m.scale_min + 1), 0);
        for (Eigen::Index r = 0; r < m.n_respondents(); ++r) {
            counts[static_cast<std::size_t>(m.values(r, c) - m.scale_min)]++;
        }
        std::vector<double> cuts;
        double cum = 0.0;
        for (std::size_t k = 0; k + 1 < counts.size(); ++k) {
            cum += static_cast<double>(counts[k]);
            double prop = std::clamp(cum / n, 1e-12, 1.0 - 1e-12);
            cuts.push_back(norm_quantile(prop));
        }
        pm.thresholds.push_back(std::move(cuts));
    }
    return pm;
}

LikertMatrix parametric_draw(const ParametricModel& pm, Eigen::Index n, Rng& rng) {
    const Eigen::Index p = pm.chol.rows();
    LikertMatrix out;
    out.item_ids = pm.item_ids;
    out.scale_min = pm.scale_min;
    out.scale_max = pm.scale_max;
    out.values.resize(n, p);
    Eigen::VectorXd z(p);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index i = 0; i < p; ++i) z(i) = rng.normal();
        Eigen::VectorXd y = pm.chol * z;
        for (Eigen::Index i = 0; i < p; ++i) {
            int cat = pm.scale_min;
            for (double cut : pm.thresholds[static_cast<std::size_t>(i)]) {
                if (y(i) > cut) ++cat;
            }
            out.values(r, i) = cat;
        }
    }
    return out;
}

}  // namespace

std::vector<int> align_communities(const CommunityPartition& reference,
                                   const CommunityPartition& candidate) {
    if (reference.assignment.size() != candidate.assignment.size()) {
        throw NumericError("align_communities: partitions cover different universes");
    }
    auto ref_groups = partition_groups(reference);
    auto cand_groups = partition_groups(candidate);

    std::vector<int> mapping(cand_groups.size(), -1);
    std::vector<bool> ref_used(ref_groups.size(), false);
    std::vector<bool> cand_used(cand_groups.size(), false);

    for (std::size_t round = 0; round < cand_groups.size(); ++round) {
        double best = -1.0;
        std::size_t best_c = 0, best_r = 0;
        for (std::size_t c = 0; c < cand_groups.size(); ++c) {
            if (cand_used[c]) continue;
            for (std::size_t r = 0; r < ref_groups.size(); ++r) {
                if (ref_used[r]) continue;
                double j = jaccard(cand_groups[c], ref_groups[r]);
                if (j > best + 1e-15) {
                    best = j;
                    best_c = c;
                    best_r = r;
                }
            }
        }
        if (best <= 0.0) break;  // nothing overlaps any more
        mapping[best_c] = static_cast<int>(best_r) + 1;
        cand_used[best_c] = true;
        ref_used[best_r] = true;
    }
    return mapping;
}

BootstrapResult boot_ega(const LikertMatrix& m, const EgaConfig& config,
                         int n_replications, std::uint64_t seed, BootMode mode) {
    if (n_replications < 1) throw ConfigError("boot_ega: n_replications must be >= 1");

    EgaResult full = run_ega(m, config);

    ParametricModel pm;
    if (mode == BootMode::kParametric) {
        pm = build_parametric_model(m, full);
    }

    std::vector<CommunityPartition> partitions;
    std::vector<int> dims;
    int failures = 0;
    for (int rep = 0; rep < n_replications; ++rep) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));
        try {
            LikertMatrix sample = mode == BootMode::kNonparametric
                                      ? resample_rows(m, rng)
                                      : parametric_draw(pm, m.n_respondents(), rng);
            EgaResult rep_result = run_ega(sample, config);
            dims.push_back(rep_result.partition.n_communities);
            partitions.push_back(std::move(rep_result.partition));
        } catch (const std::exception&) {
            ++failures;
        }
    }
    if (failures * 10 > n_replications) {
        throw NumericError("boot_ega: more than 10% of replications failed (" +
                           std::to_string(failures) + "/" +
                           std::to_string(n_replications) + ")");
    }
    if (partitions.empty()) throw NumericError("boot_ega: no successful replication");

    BootstrapResult result;
    result.n_replications = n_replications;
    result.n_successful = static_cast<int>(partitions.size());
    result.seed = seed;
    result.mode = mode;
    result.items = m.item_ids;

    for (int k : dims) result.dimension_frequencies[k] += 1.0;
    for (auto& [k, v] : result.dimension_frequencies) {
        v /= static_cast<double>(dims.size());
    }

    // Median dimension count (lower median for even lengths), then a
    // full-data refit cut at that count.
    std::vector<int> sorted_dims = dims;
    std::sort(sorted_dims.begin(), sorted_dims.end());
    int median_k = sorted_dims[(sorted_dims.size() - 1) / 2];
    result.median_structure =
        walktrap_cut(full.network.weights, config.steps, median_k);

    // Item stability against the median structure.
    std::vector<double> hits(m.item_ids.size(), 0.0);
    for (const auto& part : partitions) {
        std::vector<int> mapping = align_communities(result.median_structure, part);
        for (std::size_t i = 0; i < hits.size(); ++i) {
            int cand_comm = part.assignment[i];
            int mapped = mapping[static_cast<std::size_t>(cand_comm - 1)];
            if (mapped == result.median_structure.assignment[i]) hits[i] += 1.0;
        }
    }
    for (std::size_t i = 0; i < hits.size(); ++i) {
        result.item_stability[m.item_ids[i]] =
            hits[i] / static_cast<double>(partitions.size());
    }
    return result;
}

}  // namespace netpsych
