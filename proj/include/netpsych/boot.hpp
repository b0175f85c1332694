#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "netpsych/ega.hpp"

namespace netpsych {

enum class BootMode { kNonparametric, kParametric };

struct BootstrapResult {
    int n_replications = 0;   // requested
    int n_successful = 0;
    std::map<int, double> dimension_frequencies;  // k -> proportion
    CommunityPartition median_structure;
    std::vector<std::string> items;
    std::map<std::string, double> item_stability;
    std::uint64_t seed = 0;
    BootMode mode = BootMode::kNonparametric;
};

// Greedy maximum-Jaccard matching of candidate communities onto reference
// communities. Entry c-1 of the result holds the reference community that
// candidate community c maps to, or -1 when it matches nothing ("new").
std::vector<int> align_communities(const CommunityPartition& reference,
                                   const CommunityPartition& candidate);

// Bootstrap EGA: replicates run_ega over resampled (or parametrically
// simulated) data with per-replication seeds derived from the master seed.
// The median structure is the full-data merge-tree cut at the median
// replication dimension count; item stability is the proportion of
// replications placing the item in its median-structure community after
// maximum-overlap alignment. Throws if more than 10% of replications fail.
BootstrapResult boot_ega(const LikertMatrix& m, const EgaConfig& config,
                         int n_replications, std::uint64_t seed,
                         BootMode mode = BootMode::kNonparametric);

}  // namespace netpsych
