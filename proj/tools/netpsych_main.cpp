// netpsych command line: ingestion, descriptives, correlation estimation,
// CFA, EGA, bootstrap stability, redundancy, entropy fit, cohort tests, data
// simulation, and the full reproduction pipeline.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "netpsych/boot.hpp"
#include "netpsych/cfa.hpp"
#include "netpsych/entropy_fit.hpp"
#include "netpsych/exports.hpp"
#include "netpsych/inferential.hpp"
#include "netpsych/pipeline.hpp"
#include "netpsych/redundancy.hpp"
#include "netpsych/simulate.hpp"

namespace fs = std::filesystem;
using namespace netpsych;

namespace {

std::string default_output_dir() {
    const char* env = std::getenv("NETPSYCH_OUT");
    return env ? env : "netpsych_out";
}

struct LoadArgs {
    std::string input;
    std::vector<std::string> items;
    std::string item_prefix;
    std::string cohort_column;
    int scale_min = 1;
    int scale_max = 5;
    bool strict = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("input", input, "CSV file with a header row")->required();
        cmd->add_option("--items", items, "explicit item column names");
        cmd->add_option("--item-prefix", item_prefix,
                        "select item columns by name prefix");
        cmd->add_option("--cohort-column", cohort_column, "cohort column name");
        cmd->add_option("--scale-min", scale_min, "lowest Likert category");
        cmd->add_option("--scale-max", scale_max, "highest Likert category");
        cmd->add_flag("--strict", strict,
                      "abort on missing/out-of-range cells instead of dropping rows");
    }

    LoadOptions options() const {
        LoadOptions o;
        o.item_columns = items;
        o.item_prefix = item_prefix;
        o.cohort_column = cohort_column;
        o.scale_min = scale_min;
        o.scale_max = scale_max;
        o.missing = strict ? LoadOptions::MissingPolicy::kStrict
                           : LoadOptions::MissingPolicy::kListwiseDelete;
        return o;
    }

    LikertMatrix load(LoadReport* report = nullptr) const {
        return load_csv(input, options(), report);
    }
};

void write_artifact(const std::string& out_dir, const std::string& name,
                    const std::string& content) {
    fs::create_directories(out_dir);
    fs::path p = fs::path(out_dir) / name;
    write_text_file(p.string(), content);
    std::cout << p.string() << "\n";
}

EgaConfig make_ega_config(const std::string& method, double gamma, int n_lambda,
                          double ratio, int steps) {
    EgaConfig cfg;
    cfg.method = corr_method_from_string(method);
    cfg.gamma = gamma;
    cfg.grid.n_lambda = n_lambda;
    cfg.grid.ratio = ratio;
    cfg.steps = steps;
    return cfg;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
    if (dynamic_cast<const DataError*>(&e)) return kExitData;
    return kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"network psychometrics pipeline"};
    app.require_subcommand(1);

    std::string out_dir = default_output_dir();
    app.add_option("--out", out_dir, "output directory (env NETPSYCH_OUT)")
        ->envname("NETPSYCH_OUT");

    // describe
    auto* cmd_describe = app.add_subcommand("describe", "per-item descriptive statistics");
    LoadArgs describe_args;
    describe_args.attach(cmd_describe);

    // corr
    auto* cmd_corr = app.add_subcommand("corr", "pairwise association matrix + correlogram");
    LoadArgs corr_args;
    corr_args.attach(cmd_corr);
    std::string corr_method = "kendall";
    double corr_alpha = 0.05;
    cmd_corr->add_option("--method", corr_method,
                         "kendall|spearman|pearson|polychoric|auto");
    cmd_corr->add_option("--alpha", corr_alpha, "blank cells with p >= alpha");

    // cfa
    auto* cmd_cfa = app.add_subcommand("cfa", "confirmatory factor analysis");
    LoadArgs cfa_args;
    cfa_args.attach(cmd_cfa);
    std::string cfa_spec_path;
    cmd_cfa->add_option("--spec", cfa_spec_path, "factor model spec JSON")->required();

    // ega
    auto* cmd_ega = app.add_subcommand("ega", "exploratory graph analysis");
    LoadArgs ega_args;
    ega_args.attach(cmd_ega);
    std::string ega_method = "auto";
    double ega_gamma = 0.5;
    int ega_lambda_n = 100;
    double ega_ratio = 0.01;
    int ega_steps = 4;
    std::string ega_reference;
    cmd_ega->add_option("--method", ega_method, "correlation method");
    cmd_ega->add_option("--gamma", ega_gamma, "EBIC gamma");
    cmd_ega->add_option("--n-lambda", ega_lambda_n, "lambda grid size");
    cmd_ega->add_option("--lambda-ratio", ega_ratio, "lambda_min / lambda_max");
    cmd_ega->add_option("--steps", ega_steps, "walktrap walk length");
    cmd_ega->add_option("--reference", ega_reference,
                        "reference allocation JSON for Jaccard comparison");

    // boot
    auto* cmd_boot = app.add_subcommand("boot", "bootstrap EGA item stability");
    LoadArgs boot_args;
    boot_args.attach(cmd_boot);
    int boot_n = 500;
    std::uint64_t boot_seed = 42;
    std::string boot_mode = "nonparametric";
    std::string boot_method = "auto";
    cmd_boot->add_option("-n,--replications", boot_n, "bootstrap replications");
    cmd_boot->add_option("--seed", boot_seed, "master seed");
    cmd_boot->add_option("--mode", boot_mode, "nonparametric|parametric");
    cmd_boot->add_option("--method", boot_method, "correlation method");

    // uva
    auto* cmd_uva = app.add_subcommand("uva", "redundancy (weighted topological overlap)");
    LoadArgs uva_args;
    uva_args.attach(cmd_uva);
    std::string uva_method = "auto";
    cmd_uva->add_option("--method", uva_method, "correlation method");

    // tefi
    auto* cmd_tefi = app.add_subcommand("tefi", "entropy fit bootstrap test");
    LoadArgs tefi_args;
    tefi_args.attach(cmd_tefi);
    int tefi_draws = 500;
    std::uint64_t tefi_seed = 42;
    std::string tefi_method = "auto";
    cmd_tefi->add_option("--draws", tefi_draws, "bootstrap draws");
    cmd_tefi->add_option("--seed", tefi_seed, "master seed");
    cmd_tefi->add_option("--method", tefi_method, "correlation method");

    // compare
    auto* cmd_compare = app.add_subcommand("compare", "cohort / factor hypothesis tests");
    LoadArgs compare_args;
    compare_args.attach(cmd_compare);
    std::string compare_allocation;
    std::string compare_by = "cohort";
    cmd_compare->add_option("--allocation", compare_allocation,
                            "factor allocation JSON")->required();
    cmd_compare->add_option("--by", compare_by,
                            "cohort (groups = cohorts per factor) or factor "
                            "(groups = factors per cohort)");

    // simulate
    auto* cmd_sim = app.add_subcommand("simulate", "synthetic Likert data");
    std::string sim_output;
    int sim_factors = 2;
    int sim_items = 5;
    double sim_loading = 0.7;
    double sim_between = 0.0;
    long sim_n = 1000;
    std::uint64_t sim_seed = 1;
    cmd_sim->add_option("output", sim_output, "output CSV path")->required();
    cmd_sim->add_option("--factors", sim_factors, "number of factors");
    cmd_sim->add_option("--items-per-factor", sim_items, "items per factor");
    cmd_sim->add_option("--loading", sim_loading, "common loading");
    cmd_sim->add_option("--between", sim_between, "between-factor correlation");
    cmd_sim->add_option("-n,--rows", sim_n, "sample size");
    cmd_sim->add_option("--seed", sim_seed, "seed");

    // run
    auto* cmd_run = app.add_subcommand("run", "full reproduction pipeline");
    std::string run_config;
    std::string run_input, run_reference, run_cfa_spec, run_cohort;
    int run_boot_n = -1;
    int run_tefi_draws = -1;
    std::uint64_t run_seed = 0;
    bool run_seed_set = false;
    cmd_run->add_option("--config", run_config, "pipeline config JSON");
    cmd_run->add_option("--input", run_input, "override: input CSV");
    cmd_run->add_option("--reference", run_reference,
                        "override: reference allocation JSON");
    cmd_run->add_option("--cfa-spec", run_cfa_spec, "override: CFA spec JSON");
    cmd_run->add_option("--cohort-column", run_cohort, "override: cohort column");
    cmd_run->add_option("--boot-n", run_boot_n, "override: bootstrap replications");
    cmd_run->add_option("--tefi-draws", run_tefi_draws, "override: TEFI draws");
    cmd_run->add_option("--seed", run_seed, "override: master seed")
        ->each([&](const std::string&) { run_seed_set = true; });

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_describe) {
            LoadReport report;
            LikertMatrix m = describe_args.load(&report);
            write_artifact(out_dir, "load_report.json", to_json(report));
            write_artifact(out_dir, "descriptives.json", to_json(describe(m)));
        } else if (*cmd_corr) {
            LikertMatrix m = corr_args.load();
            AssociationMatrix am =
                association_matrix(m, corr_method_from_string(corr_method));
            write_artifact(out_dir, "correlogram.json", to_json(am));
            write_artifact(out_dir, "correlogram.svg", svg_correlogram(am, corr_alpha));
        } else if (*cmd_cfa) {
            LikertMatrix m = cfa_args.load();
            FactorAllocation alloc = load_allocation(cfa_spec_path);
            CfaFit fit = fit_cfa(m, FactorModelSpec::from_allocation(alloc));
            write_artifact(out_dir, "cfa_fit.json", to_json(fit));
            std::cout << "chi2=" << fit.chi_square << " df=" << fit.df
                      << " cfi=" << fit.cfi << " rmsea=" << fit.rmsea
                      << " srmr=" << fit.srmr << "\n";
        } else if (*cmd_ega) {
            LikertMatrix m = ega_args.load();
            EgaConfig cfg = make_ega_config(ega_method, ega_gamma, ega_lambda_n,
                                            ega_ratio, ega_steps);
            EgaResult ega = run_ega(m, cfg);
            write_artifact(out_dir, "ega_network.json", to_json(ega.network));
            write_artifact(out_dir, "ega_network.dot", to_dot(ega.network, &ega.partition));
            write_artifact(out_dir, "ega_network.graphml", to_graphml(ega.network));
            write_artifact(out_dir, "ega_partition.json",
                           partition_json(ega.partition, m.item_ids));
            write_artifact(out_dir, "correlogram.svg",
                           svg_correlogram(ega.correlations));
            if (!ega_reference.empty()) {
                FactorAllocation reference = load_allocation(ega_reference);
                FactorAllocation mine =
                    allocation_from_partition(ega.partition, m.item_ids);
                write_artifact(out_dir, "jaccard.json",
                               jaccard_json(compare_partitions(mine, reference),
                                            mine.factor_names,
                                            reference.factor_names));
            }
            std::cout << "communities=" << ega.partition.n_communities
                      << " lambda=" << ega.network.lambda_selected << "\n";
        } else if (*cmd_boot) {
            LikertMatrix m = boot_args.load();
            EgaConfig cfg;
            cfg.method = corr_method_from_string(boot_method);
            BootstrapResult boot =
                boot_ega(m, cfg, boot_n, boot_seed,
                         boot_mode == "parametric" ? BootMode::kParametric
                                                   : BootMode::kNonparametric);
            write_artifact(out_dir, "boot_stability.json", to_json(boot));
            write_artifact(out_dir, "boot_stability.svg", svg_stability_bars(boot));
        } else if (*cmd_uva) {
            LikertMatrix m = uva_args.load();
            EgaConfig cfg;
            cfg.method = corr_method_from_string(uva_method);
            EgaResult ega = run_ega(m, cfg);
            RedundancyReport report =
                flag_redundant(wto_matrix(ega.network.weights), m.item_ids);
            write_artifact(out_dir, "uva.json", to_json(report));
            write_artifact(out_dir, "uva.md", redundancy_markdown(report));
        } else if (*cmd_tefi) {
            LikertMatrix m = tefi_args.load();
            EgaConfig cfg;
            cfg.method = corr_method_from_string(tefi_method);
            EgaResult ega = run_ega(m, cfg);
            TefiComparison cmp =
                tefi_bootstrap_test(m, ega.partition, tefi_draws, tefi_seed, cfg.method);
            write_artifact(out_dir, "tefi.json", to_json(cmp));
            std::cout << "base=" << cmp.base_mean << " comparison="
                      << cmp.comparison_mean << " p=" << cmp.p_one_tailed << "\n";
        } else if (*cmd_compare) {
            LikertMatrix m = compare_args.load();
            if (!m.has_cohorts()) {
                throw DataError("compare requires --cohort-column");
            }
            FactorAllocation alloc = load_allocation(compare_allocation);
            Eigen::MatrixXd scores = factor_scores(m, alloc);
            for (std::size_t f = 0; f < alloc.factor_names.size(); ++f) {
                scores.col(static_cast<Eigen::Index>(f)) /= static_cast<double>(
                    alloc.items_of(alloc.factor_names[f]).size());
            }
            std::vector<std::string> cohorts;
            for (const auto& c : m.cohorts) {
                if (std::find(cohorts.begin(), cohorts.end(), c) == cohorts.end()) {
                    cohorts.push_back(c);
                }
            }
            std::vector<TestResult> kw, an;
            std::vector<std::vector<DunnResult>> dunn;
            std::vector<std::string> labels;
            std::vector<std::vector<std::string>> group_names;
            if (compare_by == "factor") {
                for (const auto& cohort : cohorts) {
                    std::vector<std::vector<double>> groups(alloc.n_factors());
                    for (Eigen::Index r = 0; r < m.n_respondents(); ++r) {
                        if (m.cohorts[static_cast<std::size_t>(r)] != cohort) continue;
                        for (std::size_t f = 0; f < alloc.n_factors(); ++f) {
                            groups[f].push_back(scores(r, static_cast<Eigen::Index>(f)));
                        }
                    }
                    kw.push_back(kruskal_wallis(groups));
                    an.push_back(anova_oneway(groups));
                    dunn.push_back(dunn_bonferroni(groups));
                    labels.push_back(cohort);
                    group_names.push_back(alloc.factor_names);
                }
            } else {
                for (std::size_t f = 0; f < alloc.factor_names.size(); ++f) {
                    std::vector<std::vector<double>> groups(cohorts.size());
                    for (Eigen::Index r = 0; r < m.n_respondents(); ++r) {
                        auto it = std::find(cohorts.begin(), cohorts.end(),
                                            m.cohorts[static_cast<std::size_t>(r)]);
                        groups[static_cast<std::size_t>(it - cohorts.begin())]
                            .push_back(scores(r, static_cast<Eigen::Index>(f)));
                    }
                    kw.push_back(kruskal_wallis(groups));
                    an.push_back(anova_oneway(groups));
                    dunn.push_back(dunn_bonferroni(groups));
                    labels.push_back(alloc.factor_names[f]);
                    group_names.push_back(cohorts);
                }
            }
            write_artifact(out_dir, "compare_tests.json",
                           tests_json(kw, an, dunn, labels, group_names));
            std::vector<BoxSeries> series;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                std::cout << labels[i] << ": KW=" << kw[i].statistic
                          << " p=" << kw[i].p << " | F=" << an[i].statistic
                          << " p=" << an[i].p << "\n";
            }
        } else if (*cmd_sim) {
            GeneratorSpec spec = GeneratorSpec::simple(
                sim_factors, sim_items, sim_loading, sim_between, sim_n, sim_seed);
            LikertMatrix m = generate(spec);
            write_csv(m, sim_output);
            std::cout << sim_output << "\n";
        } else if (*cmd_run) {
            PipelineConfig cfg;
            if (!run_config.empty()) cfg = PipelineConfig::from_json_file(run_config);
            if (!run_input.empty()) cfg.input_path = run_input;
            if (!run_reference.empty()) cfg.reference_allocation_path = run_reference;
            if (!run_cfa_spec.empty()) cfg.cfa_spec_path = run_cfa_spec;
            if (!run_cohort.empty()) cfg.load.cohort_column = run_cohort;
            if (run_boot_n > 0) cfg.boot_n = run_boot_n;
            if (run_tefi_draws > 0) cfg.tefi_draws = run_tefi_draws;
            if (run_seed_set) cfg.seed = run_seed;
            if (cfg.output_dir.empty()) cfg.output_dir = out_dir;
            PipelineOutcome outcome = run_full_pipeline(cfg);
            if (outcome.exit_code != kExitOk) {
                std::cerr << "pipeline failed: " << outcome.error << "\n";
                return outcome.exit_code;
            }
            std::cout << "manifest: " << outcome.manifest_path << " ("
                      << outcome.artifacts.size() << " artifacts)\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 0;
}
