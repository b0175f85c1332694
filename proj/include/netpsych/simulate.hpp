#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "netpsych/likert.hpp"

namespace netpsych {

// Synthetic Likert data from a known factor model. Items load on exactly one
// factor; item latents are loading * factor + sqrt(1 - loading^2) * noise,
// discretized at per-item thresholds (default: equiprobable 5 categories).
struct GeneratorSpec {
    std::vector<std::string> item_ids;       // defaults to i1..iP when empty
    std::vector<int> item_factor;            // 0-based factor index per item
    std::vector<double> loadings;            // per item, |loading| < 1
    Eigen::MatrixXd factor_correlations;     // PD, unit diagonal
    std::vector<std::vector<double>> thresholds;  // per item; empty = default
    long n = 0;
    std::uint64_t seed = 1;

    int n_factors() const { return static_cast<int>(factor_correlations.rows()); }
    void validate() const;

    // Convenience: k factors x items_per_factor items, equal loadings,
    // constant between-factor correlation.
    static GeneratorSpec simple(int n_factors, int items_per_factor, double loading,
                                double between_corr, long n, std::uint64_t seed);
};

// Equiprobable cut points for k categories (k-1 thresholds).
std::vector<double> equiprobable_thresholds(int n_categories);

LikertMatrix generate(const GeneratorSpec& spec);

// The latent (pre-discretization) correlation implied by the model:
// loading_i * Phi_ab * loading_j off-diagonal, 1 on the diagonal.
Eigen::MatrixXd implied_latent_correlation(const GeneratorSpec& spec);

}  // namespace netpsych
