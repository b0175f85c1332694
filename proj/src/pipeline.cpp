#include "netpsych/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "netpsych/cfa.hpp"
#include "netpsych/entropy_fit.hpp"
#include "netpsych/exports.hpp"
#include "netpsych/inferential.hpp"
#include "netpsych/redundancy.hpp"

namespace netpsych {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

// Long-form per-respondent factor means used by the box plots and tests.
Eigen::MatrixXd factor_mean_scores(const LikertMatrix& m,
                                   const FactorAllocation& alloc) {
    Eigen::MatrixXd sums = factor_scores(m, alloc);
    for (std::size_t f = 0; f < alloc.factor_names.size(); ++f) {
        sums.col(static_cast<Eigen::Index>(f)) /=
            static_cast<double>(alloc.items_of(alloc.factor_names[f]).size());
    }
    return sums;
}

std::vector<std::string> cohort_labels_in_order(const LikertMatrix& m) {
    std::vector<std::string> labels;
    for (const auto& c : m.cohorts) {
        if (std::find(labels.begin(), labels.end(), c) == labels.end()) {
            labels.push_back(c);
        }
    }
    return labels;
}

}  // namespace

PipelineConfig PipelineConfig::from_json_file(const std::string& path) {
    json j = read_json_file(path);
    PipelineConfig cfg;
    cfg.input_path = j.value("input", "");
    if (j.contains("items")) {
        cfg.load.item_columns = j["items"].get<std::vector<std::string>>();
    }
    cfg.load.item_prefix = j.value("item_prefix", "");
    cfg.load.cohort_column = j.value("cohort_column", "");
    cfg.load.scale_min = j.value("scale_min", 1);
    cfg.load.scale_max = j.value("scale_max", 5);
    if (j.value("strict", false)) {
        cfg.load.missing = LoadOptions::MissingPolicy::kStrict;
    }
    cfg.method = corr_method_from_string(j.value("method", "auto"));
    cfg.gamma = j.value("gamma", 0.5);
    cfg.grid.n_lambda = j.value("n_lambda", 100);
    cfg.grid.ratio = j.value("lambda_ratio", 0.01);
    cfg.steps = j.value("steps", 4);
    cfg.boot_n = j.value("boot_n", 500);
    cfg.boot_mode = j.value("boot_mode", std::string("nonparametric")) == "parametric"
                        ? BootMode::kParametric
                        : BootMode::kNonparametric;
    cfg.tefi_draws = j.value("tefi_draws", 500);
    cfg.seed = j.value("seed", std::uint64_t{42});
    cfg.cfa_spec_path = j.value("cfa_spec", "");
    cfg.reference_allocation_path = j.value("reference_allocation", "");
    cfg.output_dir = j.value("output_dir", "");
    return cfg;
}

FactorAllocation load_allocation(const std::string& path) {
    json j = read_json_file(path);
    if (!j.is_array()) {
        throw ConfigError("allocation file must be an array of {name, items}: " + path);
    }
    FactorAllocation alloc;
    for (const auto& entry : j) {
        alloc.add(entry.at("name").get<std::string>(),
                  entry.at("items").get<std::vector<std::string>>());
    }
    if (alloc.n_factors() == 0) throw ConfigError("allocation file is empty: " + path);
    return alloc;
}

PipelineOutcome run_full_pipeline(const PipelineConfig& config) {
    PipelineOutcome outcome;

    // Fail fast on configuration before creating any artifact.
    try {
        if (config.input_path.empty() || !fs::exists(config.input_path)) {
            throw ConfigError("input file not found: " + config.input_path);
        }
        if (config.reference_allocation_path.empty() ||
            !fs::exists(config.reference_allocation_path)) {
            throw ConfigError("reference allocation not found: " +
                              config.reference_allocation_path);
        }
        if (!config.cfa_spec_path.empty() && !fs::exists(config.cfa_spec_path)) {
            throw ConfigError("cfa spec not found: " + config.cfa_spec_path);
        }
        if (config.output_dir.empty()) {
            throw ConfigError("output directory not set");
        }
        if (config.boot_n < 1 || config.tefi_draws < 100 || config.gamma < 0.0 ||
            config.steps < 1) {
            throw ConfigError("numeric pipeline settings out of range");
        }
    } catch (const ConfigError& e) {
        outcome.exit_code = kExitConfig;
        outcome.error = e.what();
        return outcome;
    }

    std::vector<std::pair<std::string, std::string>> artifacts;  // name -> content
    auto emit = [&](const std::string& name, const std::string& content) {
        artifacts.emplace_back(name, content);
    };

    std::string stage = "setup";
    try {
        FactorAllocation reference = load_allocation(config.reference_allocation_path);
        FactorAllocation cfa_alloc =
            config.cfa_spec_path.empty() ? reference
                                         : load_allocation(config.cfa_spec_path);

        stage = "load";
        LoadReport load_report;
        LikertMatrix data = load_csv(config.input_path, config.load, &load_report);
        emit("load_report.json", to_json(load_report));

        stage = "describe";
        emit("descriptives.json", to_json(describe(data)));

        stage = "correlogram";
        AssociationMatrix kendall =
            association_matrix(data, CorrMethod::kKendallTauB);
        emit("correlogram.json", to_json(kendall));
        emit("correlogram.svg", svg_correlogram(kendall));

        stage = "cfa";
        FactorModelSpec spec = FactorModelSpec::from_allocation(cfa_alloc);
        CfaFit cfa = fit_cfa(data, spec);
        emit("cfa_fit.json", to_json(cfa));
        {
            std::ostringstream md;
            md << "# CFA fit report\n\n"
               << "- chi-square: " << cfa.chi_square << " (df " << cfa.df
               << ", p " << cfa.p << ")\n"
               << "- CFI: " << cfa.cfi << (cfa.cfi >= 0.90 ? " (acceptable)" : " (below 0.90)")
               << "\n- RMSEA: " << cfa.rmsea
               << (cfa.rmsea < 0.06 ? " (acceptable)" : " (above 0.06)")
               << "\n- SRMR: " << cfa.srmr
               << (cfa.srmr < 0.08 ? " (acceptable)" : " (above 0.08)") << "\n"
               << "- converged: " << (cfa.converged ? "yes" : "no")
               << (cfa.heywood ? "\n- warning: Heywood case (residual variance at bound)"
                               : "")
               << "\n\nModel " << (cfa.cfi >= 0.90 && cfa.rmsea < 0.06 ? "retained"
                                                                       : "rejected")
               << " under the CFI/RMSEA thresholds.\n";
            emit("cfa_report.md", md.str());
        }

        stage = "ega";
        EgaConfig ega_cfg;
        ega_cfg.method = config.method;
        ega_cfg.gamma = config.gamma;
        ega_cfg.grid = config.grid;
        ega_cfg.steps = config.steps;
        EgaResult ega = run_ega(data, ega_cfg);
        emit("ega_network.json", to_json(ega.network));
        emit("ega_network.dot", to_dot(ega.network, &ega.partition));
        emit("ega_network.graphml", to_graphml(ega.network));
        emit("ega_partition.json", partition_json(ega.partition, data.item_ids));

        stage = "bootstrap";
        BootstrapResult boot = boot_ega(data, ega_cfg, config.boot_n, config.seed,
                                        config.boot_mode);
        emit("boot_stability.json", to_json(boot));
        emit("boot_stability.svg", svg_stability_bars(boot));

        stage = "uva";
        Eigen::MatrixXd wto = wto_matrix(ega.network.weights);
        RedundancyReport uva = flag_redundant(wto, data.item_ids);
        emit("uva.json", to_json(uva));
        emit("uva.md", redundancy_markdown(uva));

        stage = "tefi";
        TefiComparison tefi_test = tefi_bootstrap_test(
            data, ega.partition, config.tefi_draws, config.seed, config.method);
        emit("tefi.json", to_json(tefi_test));

        stage = "comparison";
        FactorAllocation ega_alloc =
            allocation_from_partition(ega.partition, data.item_ids);
        Eigen::MatrixXd jaccard = compare_partitions(ega_alloc, reference);
        emit("jaccard.json", jaccard_json(jaccard, ega_alloc.factor_names,
                                          reference.factor_names));
        FactorScoreCorrelogram cross =
            factor_score_correlogram(data, ega_alloc, reference);
        emit("factor_correlogram.json",
             jaccard_json(cross.tau, cross.row_factors, cross.col_factors));
        emit("factor_correlogram.svg",
             svg_correlogram(cross.tau, cross.p_values, cross.row_factors,
                             cross.col_factors));

        stage = "cohort-tests";
        if (data.has_cohorts()) {
            std::vector<std::string> cohorts = cohort_labels_in_order(data);
            Eigen::MatrixXd means = factor_mean_scores(data, reference);

            // Per factor: groups are cohorts (box plot grouped by factor).
            std::vector<TestResult> kw_res, an_res;
            std::vector<std::vector<DunnResult>> dunn_res;
            std::vector<std::vector<std::string>> group_names;
            for (std::size_t f = 0; f < reference.factor_names.size(); ++f) {
                std::vector<std::vector<double>> groups(cohorts.size());
                for (Eigen::Index r = 0; r < data.n_respondents(); ++r) {
                    auto it = std::find(cohorts.begin(), cohorts.end(),
                                        data.cohorts[static_cast<std::size_t>(r)]);
                    groups[static_cast<std::size_t>(it - cohorts.begin())].push_back(
                        means(r, static_cast<Eigen::Index>(f)));
                }
                kw_res.push_back(kruskal_wallis(groups));
                an_res.push_back(anova_oneway(groups));
                dunn_res.push_back(dunn_bonferroni(groups));
                group_names.push_back(cohorts);
            }
            emit("cohort_tests.json",
                 tests_json(kw_res, an_res, dunn_res, reference.factor_names,
                            group_names));

            // Per cohort: groups are factors.
            std::vector<TestResult> kw_f, an_f;
            std::vector<std::vector<DunnResult>> dunn_f;
            std::vector<std::vector<std::string>> group_names_f;
            for (std::size_t c = 0; c < cohorts.size(); ++c) {
                std::vector<std::vector<double>> groups(reference.n_factors());
                for (Eigen::Index r = 0; r < data.n_respondents(); ++r) {
                    if (data.cohorts[static_cast<std::size_t>(r)] != cohorts[c]) continue;
                    for (std::size_t f = 0; f < reference.n_factors(); ++f) {
                        groups[f].push_back(means(r, static_cast<Eigen::Index>(f)));
                    }
                }
                kw_f.push_back(kruskal_wallis(groups));
                an_f.push_back(anova_oneway(groups));
                dunn_f.push_back(dunn_bonferroni(groups));
                group_names_f.push_back(reference.factor_names);
            }
            emit("factor_tests.json",
                 tests_json(kw_f, an_f, dunn_f, cohorts, group_names_f));

            // Box plots mirroring the two groupings.
            std::vector<BoxSeries> by_factor;
            for (std::size_t f = 0; f < reference.factor_names.size(); ++f) {
                BoxSeries s;
                s.label = reference.factor_names[f];
                s.groups.resize(cohorts.size());
                for (Eigen::Index r = 0; r < data.n_respondents(); ++r) {
                    auto it = std::find(cohorts.begin(), cohorts.end(),
                                        data.cohorts[static_cast<std::size_t>(r)]);
                    s.groups[static_cast<std::size_t>(it - cohorts.begin())].push_back(
                        means(r, static_cast<Eigen::Index>(f)));
                }
                by_factor.push_back(std::move(s));
            }
            emit("cohort_boxplot.svg",
                 svg_boxplot(cohorts, by_factor, "mean Likert score"));

            std::vector<BoxSeries> by_cohort;
            for (std::size_t c = 0; c < cohorts.size(); ++c) {
                BoxSeries s;
                s.label = cohorts[c];
                s.groups.resize(reference.n_factors());
                for (Eigen::Index r = 0; r < data.n_respondents(); ++r) {
                    if (data.cohorts[static_cast<std::size_t>(r)] != cohorts[c]) continue;
                    for (std::size_t f = 0; f < reference.n_factors(); ++f) {
                        s.groups[f].push_back(means(r, static_cast<Eigen::Index>(f)));
                    }
                }
                by_cohort.push_back(std::move(s));
            }
            emit("factor_boxplot.svg",
                 svg_boxplot(reference.factor_names, by_cohort, "mean Likert score"));
        }

        stage = "summary";
        {
            std::ostringstream md;
            md << "# Pipeline summary\n\n"
               << "- input: " << config.input_path << "\n"
               << "- respondents: " << data.n_respondents()
               << ", items: " << data.n_items() << "\n"
               << "- master seed: " << config.seed << "\n"
               << "- CFA chi-square " << cfa.chi_square << " (df " << cfa.df
               << "), CFI " << cfa.cfi << ", RMSEA " << cfa.rmsea << ", SRMR "
               << cfa.srmr << "\n"
               << "- EGA communities: " << ega.partition.n_communities
               << " (lambda " << ega.network.lambda_selected << ")\n"
               << "- bootstrap replications: " << boot.n_successful << "/"
               << boot.n_replications << "\n"
               << "- TEFI base " << tefi_test.base_mean << " vs comparison "
               << tefi_test.comparison_mean << " (one-tailed p "
               << tefi_test.p_one_tailed << ")\n";
            emit("summary.md", md.str());
        }
    } catch (const ConfigError& e) {
        outcome.exit_code = kExitConfig;
        outcome.error = "[" + stage + "] " + e.what();
        return outcome;
    } catch (const DataError& e) {
        outcome.exit_code = kExitData;
        outcome.error = "[" + stage + "] " + e.what();
        return outcome;
    } catch (const std::exception& e) {
        outcome.exit_code = kExitNumeric;
        outcome.error = "[" + stage + "] " + e.what();
        return outcome;
    }

    // Write everything, then the manifest.
    fs::create_directories(config.output_dir);
    json manifest;
    manifest["seed"] = config.seed;
    manifest["input"] = config.input_path;
    json files;
    for (const auto& [name, content] : artifacts) {
        fs::path path = fs::path(config.output_dir) / name;
        write_text_file(path.string(), content);
        files[name] = {{"sha256", sha256_hex(content)}, {"bytes", content.size()}};
        outcome.artifacts.push_back(name);
    }
    manifest["artifacts"] = std::move(files);
    fs::path manifest_path = fs::path(config.output_dir) / "manifest.json";
    write_text_file(manifest_path.string(), manifest.dump(2) + "\n");
    outcome.manifest_path = manifest_path.string();
    return outcome;
}

}  // namespace netpsych
