#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netpsych/boot.hpp"
#include "netpsych/ega.hpp"
#include "netpsych/likert.hpp"

namespace netpsych {

// Exit codes shared by the pipeline and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumeric = 4;

struct PipelineConfig {
    std::string input_path;
    LoadOptions load;
    CorrMethod method = CorrMethod::kAuto;
    double gamma = 0.5;
    LambdaGrid grid;
    int steps = 4;
    int boot_n = 500;
    BootMode boot_mode = BootMode::kNonparametric;
    int tefi_draws = 500;
    std::uint64_t seed = 42;
    std::string cfa_spec_path;              // reference factor model (JSON)
    std::string reference_allocation_path;  // reference factor allocation (JSON)
    std::string output_dir;

    static PipelineConfig from_json_file(const std::string& path);
};

// Factor allocation file: [{"name": "...", "items": ["...", ...]}, ...].
FactorAllocation load_allocation(const std::string& path);

struct PipelineOutcome {
    int exit_code = kExitOk;
    std::string error;                // empty on success
    std::vector<std::string> artifacts;  // paths relative to output_dir
    std::string manifest_path;
};

// Runs the full reproduction chain (descriptives, Kendall correlogram, CFA
// against the reference spec, EGA, bootstrap stability, UVA, TEFI test,
// Jaccard/factor-score comparisons, cohort tests) and writes every artifact
// plus a checksum manifest. Validates all referenced paths before writing
// anything.
PipelineOutcome run_full_pipeline(const PipelineConfig& config);

}  // namespace netpsych
