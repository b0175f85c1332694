// Python bindings for the main operations: data ingestion and simulation,
// association estimation, GLASSO network selection, community detection,
// EGA, bootstrap stability, redundancy, entropy fit, CFA, and group tests.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "netpsych/boot.hpp"
#include "netpsych/cfa.hpp"
#include "netpsych/entropy_fit.hpp"
#include "netpsych/exports.hpp"
#include "netpsych/inferential.hpp"
#include "netpsych/pipeline.hpp"
#include "netpsych/redundancy.hpp"
#include "netpsych/simulate.hpp"

namespace py = pybind11;
using namespace netpsych;

namespace {

LikertMatrix matrix_from_python(const Eigen::MatrixXi& values,
                                std::vector<std::string> item_ids,
                                std::vector<std::string> cohorts, int scale_min,
                                int scale_max) {
    LikertMatrix m;
    m.values = values;
    if (item_ids.empty()) {
        for (Eigen::Index i = 0; i < values.cols(); ++i) {
            item_ids.push_back("i" + std::to_string(i + 1));
        }
    }
    m.item_ids = std::move(item_ids);
    m.cohorts = std::move(cohorts);
    m.scale_min = scale_min;
    m.scale_max = scale_max;
    m.validate();
    return m;
}

FactorAllocation allocation_from_dict(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& factors) {
    FactorAllocation alloc;
    for (const auto& [name, items] : factors) alloc.add(name, items);
    return alloc;
}

}  // namespace

PYBIND11_MODULE(_netpsych, m) {
    m.doc() = "network psychometrics core (Likert ingestion, EGA, CFA, bootstrap)";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<DataError>(m, "DataError");
    py::register_exception<NumericError>(m, "NumericError");

    py::class_<LikertMatrix>(m, "LikertMatrix")
        .def(py::init(&matrix_from_python), py::arg("values"),
             py::arg("item_ids") = std::vector<std::string>{},
             py::arg("cohorts") = std::vector<std::string>{},
             py::arg("scale_min") = 1, py::arg("scale_max") = 5)
        .def_readonly("values", &LikertMatrix::values)
        .def_readonly("item_ids", &LikertMatrix::item_ids)
        .def_readonly("cohorts", &LikertMatrix::cohorts)
        .def_readonly("scale_min", &LikertMatrix::scale_min)
        .def_readonly("scale_max", &LikertMatrix::scale_max)
        .def_property_readonly("n_respondents", &LikertMatrix::n_respondents)
        .def_property_readonly("n_items", &LikertMatrix::n_items);

    py::class_<ItemDescriptives>(m, "ItemDescriptives")
        .def_readonly("item_id", &ItemDescriptives::item_id)
        .def_readonly("mean", &ItemDescriptives::mean)
        .def_readonly("sd", &ItemDescriptives::sd)
        .def_readonly("median", &ItemDescriptives::median)
        .def_readonly("min", &ItemDescriptives::min)
        .def_readonly("max", &ItemDescriptives::max)
        .def_readonly("n", &ItemDescriptives::n);

    py::class_<AssociationMatrix>(m, "AssociationMatrix")
        .def_readonly("coefficients", &AssociationMatrix::coefficients)
        .def_readonly("p_values", &AssociationMatrix::p_values)
        .def_readonly("n_used", &AssociationMatrix::n_used)
        .def_readonly("item_ids", &AssociationMatrix::item_ids)
        .def_property_readonly("method", [](const AssociationMatrix& a) {
            return to_string(a.method);
        });

    py::class_<PartialCorrelationNetwork>(m, "PartialCorrelationNetwork")
        .def_readonly("nodes", &PartialCorrelationNetwork::nodes)
        .def_readonly("weights", &PartialCorrelationNetwork::weights)
        .def_readonly("lambda_selected", &PartialCorrelationNetwork::lambda_selected)
        .def_readonly("ebic", &PartialCorrelationNetwork::ebic)
        .def("n_edges", &PartialCorrelationNetwork::n_edges);

    py::class_<CommunityPartition>(m, "CommunityPartition")
        .def_readonly("assignment", &CommunityPartition::assignment)
        .def_readonly("n_communities", &CommunityPartition::n_communities)
        .def_readonly("modularity", &CommunityPartition::modularity);

    py::class_<EgaResult>(m, "EgaResult")
        .def_readonly("network", &EgaResult::network)
        .def_readonly("partition", &EgaResult::partition)
        .def_readonly("correlations", &EgaResult::correlations)
        .def("community_items", &EgaResult::community_items);

    py::class_<BootstrapResult>(m, "BootstrapResult")
        .def_readonly("n_replications", &BootstrapResult::n_replications)
        .def_readonly("n_successful", &BootstrapResult::n_successful)
        .def_readonly("dimension_frequencies", &BootstrapResult::dimension_frequencies)
        .def_readonly("median_structure", &BootstrapResult::median_structure)
        .def_readonly("item_stability", &BootstrapResult::item_stability)
        .def_readonly("items", &BootstrapResult::items)
        .def_readonly("seed", &BootstrapResult::seed);

    py::class_<TefiComparison>(m, "TefiComparison")
        .def_readonly("base_mean", &TefiComparison::base_mean)
        .def_readonly("base_sd", &TefiComparison::base_sd)
        .def_readonly("comparison_mean", &TefiComparison::comparison_mean)
        .def_readonly("comparison_sd", &TefiComparison::comparison_sd)
        .def_readonly("p_one_tailed", &TefiComparison::p_one_tailed)
        .def_readonly("n_draws", &TefiComparison::n_draws);

    py::class_<CfaFit>(m, "CfaFit")
        .def_readonly("loadings", &CfaFit::loadings)
        .def_readonly("residual_variances", &CfaFit::residual_variances)
        .def_readonly("factor_correlations", &CfaFit::factor_correlations)
        .def_readonly("chi_square", &CfaFit::chi_square)
        .def_readonly("df", &CfaFit::df)
        .def_readonly("p", &CfaFit::p)
        .def_readonly("cfi", &CfaFit::cfi)
        .def_readonly("rmsea", &CfaFit::rmsea)
        .def_readonly("srmr", &CfaFit::srmr)
        .def_readonly("converged", &CfaFit::converged)
        .def_readonly("heywood", &CfaFit::heywood)
        .def_readonly("n", &CfaFit::n);

    py::class_<TestResult>(m, "TestResult")
        .def_readonly("statistic", &TestResult::statistic)
        .def_readonly("p", &TestResult::p)
        .def_readonly("test", &TestResult::test)
        .def_readonly("df1", &TestResult::df1)
        .def_readonly("df2", &TestResult::df2)
        .def_readonly("degenerate", &TestResult::degenerate);

    py::class_<DunnResult>(m, "DunnResult")
        .def_readonly("group_a", &DunnResult::group_a)
        .def_readonly("group_b", &DunnResult::group_b)
        .def_readonly("z", &DunnResult::z)
        .def_readonly("p_unadjusted", &DunnResult::p_unadjusted)
        .def_readonly("p_adjusted", &DunnResult::p_adjusted);

    m.def("load_csv",
          [](const std::string& path, const std::vector<std::string>& items,
             const std::string& item_prefix, const std::string& cohort_column,
             bool strict) {
              LoadOptions o;
              o.item_columns = items;
              o.item_prefix = item_prefix;
              o.cohort_column = cohort_column;
              o.missing = strict ? LoadOptions::MissingPolicy::kStrict
                                 : LoadOptions::MissingPolicy::kListwiseDelete;
              return load_csv(path, o);
          },
          py::arg("path"), py::arg("items") = std::vector<std::string>{},
          py::arg("item_prefix") = "", py::arg("cohort_column") = "",
          py::arg("strict") = false);

    m.def("describe", &describe, py::arg("matrix"));

    m.def("simulate",
          [](int n_factors, int items_per_factor, double loading, double between,
             long n, std::uint64_t seed) {
              return generate(GeneratorSpec::simple(n_factors, items_per_factor,
                                                    loading, between, n, seed));
          },
          py::arg("n_factors"), py::arg("items_per_factor"), py::arg("loading"),
          py::arg("between") = 0.0, py::arg("n") = 1000, py::arg("seed") = 1);

    m.def("kendall_tau_b",
          [](const std::vector<double>& x, const std::vector<double>& y) {
              CorrResult r = kendall_tau_b(x, y);
              return py::make_tuple(r.coefficient, r.p);
          },
          py::arg("x"), py::arg("y"));

    m.def("polychoric",
          [](const std::vector<int>& x, const std::vector<int>& y) {
              return polychoric(x, y);
          },
          py::arg("x"), py::arg("y"));

    m.def("association_matrix",
          [](const LikertMatrix& m2, const std::string& method) {
              return association_matrix(m2, corr_method_from_string(method));
          },
          py::arg("matrix"), py::arg("method") = "auto");

    m.def("nearest_positive_definite", &nearest_positive_definite, py::arg("matrix"),
          py::arg("floor") = 1e-6);

    m.def("glasso",
          [](const Eigen::MatrixXd& corr, double lambda) {
              PrecisionEstimate est = glasso_fit(corr, lambda);
              return py::make_tuple(est.precision, est.covariance_hat);
          },
          py::arg("corr"), py::arg("lambda_"));

    m.def("select_network",
          [](const Eigen::MatrixXd& corr, std::vector<std::string> nodes, long n,
             double gamma) {
              if (nodes.empty()) {
                  for (Eigen::Index i = 0; i < corr.rows(); ++i) {
                      nodes.push_back("i" + std::to_string(i + 1));
                  }
              }
              return select_lambda(corr, std::move(nodes), n, gamma);
          },
          py::arg("corr"), py::arg("nodes") = std::vector<std::string>{},
          py::arg("n") = 1000, py::arg("gamma") = 0.5);

    m.def("walktrap", &walktrap, py::arg("weights"), py::arg("steps") = 4);
    m.def("louvain", &louvain, py::arg("weights"), py::arg("resolution") = 1.0);
    m.def("modularity", &modularity, py::arg("weights"), py::arg("assignment"));

    m.def("run_ega",
          [](const LikertMatrix& data, const std::string& method, double gamma,
             int steps) {
              EgaConfig cfg;
              cfg.method = corr_method_from_string(method);
              cfg.gamma = gamma;
              cfg.steps = steps;
              return run_ega(data, cfg);
          },
          py::arg("matrix"), py::arg("method") = "auto", py::arg("gamma") = 0.5,
          py::arg("steps") = 4);

    m.def("boot_ega",
          [](const LikertMatrix& data, int n_replications, std::uint64_t seed,
             const std::string& method, const std::string& mode) {
              EgaConfig cfg;
              cfg.method = corr_method_from_string(method);
              return boot_ega(data, cfg, n_replications, seed,
                              mode == "parametric" ? BootMode::kParametric
                                                   : BootMode::kNonparametric);
          },
          py::arg("matrix"), py::arg("n_replications") = 500, py::arg("seed") = 42,
          py::arg("method") = "auto", py::arg("mode") = "nonparametric");

    m.def("wto_matrix", &wto_matrix, py::arg("weights"));

    m.def("tefi",
          [](const Eigen::MatrixXd& corr, const std::vector<int>& assignment) {
              return tefi(corr, assignment).tefi;
          },
          py::arg("corr"), py::arg("assignment"));

    m.def("tefi_bootstrap_test",
          [](const LikertMatrix& data, const CommunityPartition& partition,
             int n_draws, std::uint64_t seed, const std::string& method) {
              return tefi_bootstrap_test(data, partition, n_draws, seed,
                                         corr_method_from_string(method));
          },
          py::arg("matrix"), py::arg("partition"), py::arg("n_draws") = 500,
          py::arg("seed") = 42, py::arg("method") = "auto");

    m.def("fit_cfa",
          [](const LikertMatrix& data,
             const std::vector<std::pair<std::string, std::vector<std::string>>>&
                 factors) {
              return fit_cfa(data, FactorModelSpec::from_allocation(
                                       allocation_from_dict(factors)));
          },
          py::arg("matrix"), py::arg("factors"));

    m.def("factor_scores",
          [](const LikertMatrix& data,
             const std::vector<std::pair<std::string, std::vector<std::string>>>&
                 factors) { return factor_scores(data, allocation_from_dict(factors)); },
          py::arg("matrix"), py::arg("factors"));

    m.def("jaccard_matrix",
          [](const std::vector<std::pair<std::string, std::vector<std::string>>>& a,
             const std::vector<std::pair<std::string, std::vector<std::string>>>& b) {
              return compare_partitions(allocation_from_dict(a),
                                        allocation_from_dict(b));
          },
          py::arg("a"), py::arg("b"));

    m.def("kruskal_wallis", &kruskal_wallis, py::arg("groups"));
    m.def("dunn_bonferroni", &dunn_bonferroni, py::arg("groups"));
    m.def("anova_oneway", &anova_oneway, py::arg("groups"));

    m.attr("__version__") = "0.1.0";
}
