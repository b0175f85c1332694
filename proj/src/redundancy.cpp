#include "netpsych/redundancy.hpp"

#include <algorithm>
#include <cmath>

#include "netpsych/association.hpp"

namespace netpsych {

Eigen::MatrixXd wto_matrix(const Eigen::MatrixXd& weights) {
    const Eigen::Index p = weights.rows();
    if (p < 2 || weights.cols() != p) {
        throw NumericError("wto: need a square network with at least 2 nodes");
    }
    Eigen::MatrixXd a = weights.cwiseAbs();
    a.diagonal().setZero();
    Eigen::VectorXd k = a.rowwise().sum();
    Eigen::MatrixXd wto = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i + 1; j < p; ++j) {
            double shared = 0.0;
            for (Eigen::Index u = 0; u < p; ++u) {
                if (u == i || u == j) continue;
                shared += a(i, u) * a(j, u);
            }
            double denom = std::min(k(i), k(j)) + 1.0 - a(i, j);
            double v = (shared + a(i, j)) / denom;
            wto(i, j) = wto(j, i) = v;
        }
    }
    return wto;
}

RedundancyReport flag_redundant(const Eigen::MatrixXd& wto,
                                const std::vector<std::string>& items,
                                double flag_threshold,
                                double conservative_threshold) {
    const Eigen::Index p = wto.rows();
    if (static_cast<Eigen::Index>(items.size()) != p) {
        throw NumericError("flag_redundant: item list does not match matrix size");
    }
    RedundancyReport report;
    report.flag_threshold = flag_threshold;
    report.conservative_threshold = conservative_threshold;
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i + 1; j < p; ++j) {
            if (wto(i, j) >= flag_threshold) {
                report.pairs.push_back({items[static_cast<std::size_t>(i)],
                                        items[static_cast<std::size_t>(j)],
                                        wto(i, j)});
            }
        }
    }
    std::stable_sort(report.pairs.begin(), report.pairs.end(),
                     [](const RedundantPair& a, const RedundantPair& b) {
                         return a.wto > b.wto;
                     });
    return report;
}

std::vector<RedundantPair> RedundancyReport::conservative() const {
    std::vector<RedundantPair> out;
    for (const auto& p : pairs) {
        if (p.wto >= conservative_threshold) out.push_back(p);
    }
    return out;
}

std::vector<RedundantPair> RedundancyReport::moderate() const {
    std::vector<RedundantPair> out;
    for (const auto& p : pairs) {
        if (p.wto >= 0.25 && p.wto < conservative_threshold) out.push_back(p);
    }
    return out;
}

std::vector<RedundantPair> RedundancyReport::small_to_moderate() const {
    std::vector<RedundantPair> out;
    for (const auto& p : pairs) {
        if (p.wto >= flag_threshold && p.wto < 0.25) out.push_back(p);
    }
    return out;
}

}  // namespace netpsych
