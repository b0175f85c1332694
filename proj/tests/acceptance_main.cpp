// Acceptance suite: one pass/fail line per criterion.
//
// Criteria 3-9 target the released questionnaire dataset. When it is
// supplied (--data <csv> or MAS_IT_CSV env; items i1..i23, optional cohort
// column), the paper-exact assertions run. Without it, criteria 3/4/5/7 run
// their documented simulator/property fallbacks and criteria 6/8/9 run the
// closest derived analogues; every line states which mode ran.

#include <Eigen/Cholesky>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "netpsych/boot.hpp"
#include "netpsych/cfa.hpp"
#include "netpsych/entropy_fit.hpp"
#include "netpsych/exports.hpp"
#include "netpsych/inferential.hpp"
#include "netpsych/pipeline.hpp"
#include "netpsych/redundancy.hpp"
#include "netpsych/simulate.hpp"
#include "oracles.hpp"

using namespace netpsych;
using namespace netpsych::oracles;

namespace {

#ifndef NETPSYCH_DATA_DIR
#define NETPSYCH_DATA_DIR "data"
#endif

int g_failures = 0;

void report(int criterion, bool ok, const std::string& mode,
            const std::string& detail) {
    std::cout << "criterion " << criterion << ": " << (ok ? "PASS" : "FAIL")
              << " [" << mode << "] " << detail << "\n";
    if (!ok) ++g_failures;
}

struct Ctx {
    bool has_data = false;
    LikertMatrix data;
    FactorAllocation reference;
    std::string cohort_column = "cohort";
};

// ---------------------------------------------------------------------------
// Shared synthetic fixtures for the analogue checks.

// Continuous draws from an exact simple-structure factor model.
Eigen::MatrixXd factor_model_sample(const std::vector<int>& item_factor,
                                    double loading, const Eigen::MatrixXd& phi,
                                    long n, Rng& rng) {
    const int p = static_cast<int>(item_factor.size());
    Eigen::LLT<Eigen::MatrixXd> llt(phi);
    Eigen::MatrixXd chol = llt.matrixL();
    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd z(phi.rows());
    const double resid = std::sqrt(1.0 - loading * loading);
    for (long r = 0; r < n; ++r) {
        for (Eigen::Index f = 0; f < phi.rows(); ++f) z(f) = rng.normal();
        Eigen::VectorXd factors = chol * z;
        for (int i = 0; i < p; ++i) {
            x(r, i) = loading * factors(item_factor[static_cast<std::size_t>(i)]) +
                      resid * rng.normal();
        }
    }
    return x;
}

Eigen::MatrixXd sample_cov(const Eigen::MatrixXd& x) {
    Eigen::RowVectorXd mean = x.colwise().mean();
    Eigen::MatrixXd centered = x.rowwise() - mean;
    return centered.transpose() * centered / static_cast<double>(x.rows() - 1);
}

// Questionnaire-like ordinal data: 23 items, 4 blocks, positive manifold.
LikertMatrix mas_like_data(long n, std::uint64_t seed, double between) {
    GeneratorSpec spec;
    const int sizes[4] = {8, 4, 5, 6};
    spec.factor_correlations = Eigen::MatrixXd::Constant(4, 4, between);
    spec.factor_correlations.diagonal().setOnes();
    int item = 1;
    for (int f = 0; f < 4; ++f) {
        for (int j = 0; j < sizes[f]; ++j) {
            spec.item_factor.push_back(f);
            spec.loadings.push_back(0.8);
            spec.item_ids.push_back("i" + std::to_string(item++));
        }
    }
    spec.n = n;
    spec.seed = seed;
    return generate(spec);
}

// ---------------------------------------------------------------------------

void criterion_1() {
    Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
    FitIndices fi = fit_indices(898.803, 227, 324, 3000.0, 253, eye, eye);
    std::ostringstream os;
    os << "fit_indices(chi2=898.803, df=227, N=324) -> RMSEA=" << fi.rmsea
       << " (want 0.096 +- 0.001)";
    report(1, std::fabs(fi.rmsea - 0.096) <= 0.001, "paper-exact arithmetic", os.str());
}

void criterion_2(const Ctx& ctx) {
    FactorModelSpec spec = FactorModelSpec::from_allocation(ctx.reference);
    int n_items = 0;
    for (const auto& f : ctx.reference.factor_names) {
        n_items += static_cast<int>(ctx.reference.items_of(f).size());
    }
    int df = n_items * (n_items + 1) / 2 - spec.free_parameter_count(n_items);
    std::ostringstream os;
    os << "23-item 3-factor simple structure: df=" << df << " (want exactly 227)";
    report(2, n_items == 23 && df == 227, "paper-exact arithmetic", os.str());
}

void criterion_3(const Ctx& ctx) {
    if (ctx.has_data) {
        FactorModelSpec spec = FactorModelSpec::from_allocation(ctx.reference);
        CfaFit fit = fit_cfa(ctx.data, spec);
        bool ok = std::fabs(fit.chi_square - 898.803) <= 0.02 * 898.803 &&
                  std::fabs(fit.cfi - 0.811) <= 0.02 &&
                  std::fabs(fit.srmr - 0.079) <= 0.01;
        std::ostringstream os;
        os << "CFA on dataset: chi2=" << fit.chi_square << " (want 898.8 +- 2%), cfi="
           << fit.cfi << " (want 0.811 +- 0.02), srmr=" << fit.srmr
           << " (want 0.079 +- 0.01)";
        report(3, ok, "paper-exact", os.str());
        return;
    }
    // Spec fallback: 5000-row data simulated exactly from a 3-factor model.
    Rng rng(30303);
    std::vector<int> item_factor;
    const int sizes[3] = {9, 8, 6};
    std::vector<std::string> items;
    for (int f = 0; f < 3; ++f) {
        for (int j = 0; j < sizes[f]; ++j) {
            item_factor.push_back(f);
            items.push_back("i" + std::to_string(items.size() + 1));
        }
    }
    Eigen::MatrixXd phi = Eigen::MatrixXd::Constant(3, 3, 0.3);
    phi.diagonal().setOnes();
    Eigen::MatrixXd x = factor_model_sample(item_factor, 0.7, phi, 5000, rng);
    Eigen::MatrixXd s = sample_cov(x);

    FactorModelSpec spec;
    spec.factor_names = {"F1", "F2", "F3"};
    for (std::size_t i = 0; i < items.size(); ++i) {
        spec.loading_pattern[items[i]] =
            spec.factor_names[static_cast<std::size_t>(item_factor[i])];
    }
    CfaFit fit = fit_cfa_cov(s, 5000, items, spec);
    double max_err = 0.0;
    for (const auto& [item, lambda] : fit.loadings) {
        max_err = std::max(max_err, std::fabs(lambda - 0.7));
    }
    double ratio = fit.chi_square / fit.df;
    bool ok = fit.converged && max_err <= 0.05 && ratio >= 0.8 && ratio <= 1.3;
    std::ostringstream os;
    os << "CFA recovery on simulated 3-factor data (n=5000): max loading error="
       << max_err << " (want <= 0.05), chi2/df=" << ratio << " (want in [0.8, 1.3])";
    report(3, ok, "spec fallback (dataset unavailable)", os.str());
}

void criterion_4(const Ctx& ctx) {
    if (ctx.has_data) {
        EgaResult ega = run_ega(ctx.data);
        FactorAllocation mine =
            allocation_from_partition(ega.partition, ctx.data.item_ids);
        Eigen::MatrixXd j = compare_partitions(mine, ctx.reference);
        // Columns follow the reference order: Evaluation, Everyday_Social,
        // Passive_Observation.
        double best_passive = j.col(2).maxCoeff();
        double best_everyday = j.col(1).maxCoeff();
        bool ok = ega.partition.n_communities == 4 &&
                  std::fabs(best_passive - 1.0) <= 1e-12 &&
                  std::fabs(best_everyday - 0.5) <= 1e-12;
        std::ostringstream os;
        os << "EGA on dataset: " << ega.partition.n_communities
           << " communities (want 4), J(best, PassiveObservation)=" << best_passive
           << " (want 1), J(best, Everyday/Social)=" << best_everyday
           << " (want 0.5)";
        report(4, ok, "paper-exact", os.str());
        return;
    }
    // Spec fallback: planted 4-block recovery over 20 seeds.
    int exact = 0;
    for (int seed = 1; seed <= 20; ++seed) {
        GeneratorSpec spec = GeneratorSpec::simple(4, 5, 0.7, 0.2, 2000,
                                                   40000 + seed);
        LikertMatrix m = generate(spec);
        EgaResult ega = run_ega(m);
        if (ega.partition.n_communities != 4) continue;
        bool match = true;
        for (int b = 0; b < 4 && match; ++b) {
            int label = ega.partition.assignment[static_cast<std::size_t>(b * 5)];
            for (int k = 1; k < 5; ++k) {
                if (ega.partition.assignment[static_cast<std::size_t>(b * 5 + k)] !=
                    label) {
                    match = false;
                    break;
                }
            }
        }
        if (match) ++exact;
    }
    std::ostringstream os;
    os << "EGA planted 4-block recovery: exact in " << exact
       << "/20 seeds (want >= 19)";
    report(4, exact >= 19, "spec fallback (dataset unavailable)", os.str());
}

void criterion_5(const Ctx& ctx) {
    if (ctx.has_data) {
        EgaConfig cfg;
        BootstrapResult boot = boot_ega(ctx.data, cfg, 500, 42);
        bool passive_ok = true;
        for (const auto& item : ctx.reference.items_of("Passive_Observation")) {
            if (std::fabs(boot.item_stability.at(item) - 1.0) > 1e-12) {
                passive_ok = false;
            }
        }
        bool f3_ok = true;
        std::ostringstream f3;
        for (const auto& item : {"i10", "i15", "i16", "i17"}) {
            double s = boot.item_stability.at(item);
            f3 << item << "=" << s << " ";
            if (std::fabs(s - 0.53) > 0.10) f3_ok = false;
        }
        std::ostringstream os;
        os << "bootEGA(500) on dataset: passive items at 1.00: "
           << (passive_ok ? "yes" : "no") << "; factor-III items " << f3.str()
           << "(want 0.53 +- 0.10)";
        report(5, passive_ok && f3_ok, "paper-exact", os.str());
        return;
    }
    // Spec fallback: clean 2-factor data -> all stabilities >= 0.95.
    GeneratorSpec spec = GeneratorSpec::simple(2, 5, 0.8, 0.0, 2000, 50505);
    LikertMatrix m = generate(spec);
    EgaConfig cfg;
    BootstrapResult boot = boot_ega(m, cfg, 100, 42);
    double min_stab = 1.0;
    for (const auto& [item, s] : boot.item_stability) min_stab = std::min(min_stab, s);
    std::ostringstream os;
    os << "bootEGA(100) on clean 2-factor data: min item stability=" << min_stab
       << " (want >= 0.95)";
    report(5, min_stab >= 0.95, "spec fallback (dataset unavailable)", os.str());
}

void criterion_6(const Ctx& ctx) {
    if (ctx.has_data) {
        EgaResult ega = run_ega(ctx.data);
        Eigen::MatrixXd wto = wto_matrix(ega.network.weights);
        RedundancyReport rep = flag_redundant(wto, ctx.data.item_ids);
        auto conservative = rep.conservative();
        bool top_ok =
            conservative.size() == 1 &&
            ((conservative[0].item_a == "i2" && conservative[0].item_b == "i9") ||
             (conservative[0].item_a == "i9" && conservative[0].item_b == "i2")) &&
            std::fabs(conservative[0].wto - 0.308) <= 0.02;
        auto in_band = [&](const std::string& a, const std::string& b) {
            for (const auto& p : rep.small_to_moderate()) {
                if ((p.item_a == a && p.item_b == b) ||
                    (p.item_a == b && p.item_b == a)) {
                    return true;
                }
            }
            return false;
        };
        bool bands_ok = in_band("i15", "i16") && in_band("i18", "i19");
        std::ostringstream os;
        os << "UVA on dataset: unique >=0.30 pair (i2,i9)@0.308 +- 0.02: "
           << (top_ok ? "yes" : "no") << "; (i15,i16) and (i18,i19) in 0.20-0.25: "
           << (bands_ok ? "yes" : "no");
        report(6, top_ok && bands_ok, "paper-exact", os.str());
        return;
    }
    // Analogue: hand-arithmetic wTO value plus detection of a planted
    // locally-dependent pair on questionnaire-like data.
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
    w(0, 1) = w(1, 0) = 0.5;
    w(0, 2) = w(2, 0) = 0.4;
    w(1, 2) = w(2, 1) = 0.4;
    bool hand_ok = std::fabs(wto_matrix(w)(0, 1) - 0.66 / 1.4) < 1e-12;

    LikertMatrix m = mas_like_data(324, 60606, 0.45);
    // Make item 9 a locally dependent near-copy of item 2.
    Rng noise(607);
    for (Eigen::Index r = 0; r < m.n_respondents(); ++r) {
        if (noise.u01() < 0.85) m.values(r, 8) = m.values(r, 1);
    }
    EgaResult ega = run_ega(m);
    Eigen::MatrixXd wto = wto_matrix(ega.network.weights);
    RedundancyReport rep = flag_redundant(wto, m.item_ids);
    bool top_is_pair = !rep.pairs.empty() &&
                       ((rep.pairs[0].item_a == "i2" && rep.pairs[0].item_b == "i9") ||
                        (rep.pairs[0].item_a == "i9" && rep.pairs[0].item_b == "i2"));
    bool flagged = top_is_pair && !rep.conservative().empty();
    std::ostringstream os;
    os << "wTO analogue: 3-node hand value 0.4714 exact: " << (hand_ok ? "yes" : "no")
       << "; planted redundant pair (i2,i9) is the top pair and exceeds 0.30: "
       << (flagged ? "yes" : "no") << " (top="
       << (rep.pairs.empty() ? std::string("none")
                             : rep.pairs[0].item_a + "," + rep.pairs[0].item_b + "@" +
                                   std::to_string(rep.pairs[0].wto))
       << "); paper-exact check runs with --data";
    report(6, hand_ok && flagged, "analogue (dataset unavailable)", os.str());
}

void criterion_7(const Ctx& ctx) {
    if (ctx.has_data) {
        EgaResult ega = run_ega(ctx.data);
        TefiComparison cmp = tefi_bootstrap_test(ctx.data, ega.partition, 500, 42);
        bool ok = cmp.base_mean < cmp.comparison_mean && cmp.p_one_tailed <= 0.01;
        std::ostringstream os;
        os << "TEFI test on dataset: base=" << cmp.base_mean << " vs comparison="
           << cmp.comparison_mean << ", one-tailed p=" << cmp.p_one_tailed
           << " (want base < comparison, p <= 0.01)";
        report(7, ok, "paper-exact", os.str());
        return;
    }
    // Property fallback: exhaustive block-diagonal optimality (<= 8 items)
    // plus the planted-structure bootstrap expectation.
    bool property_ok = true;
    struct Case {
        std::vector<int> sizes;
        std::vector<double> r;
    };
    const Case cases[] = {
        {{4, 4}, {0.6, 0.6}}, {{3, 5}, {0.5, 0.7}}, {{2, 3, 3}, {0.8, 0.5, 0.6}}};
    for (const auto& c : cases) {
        int p = 0;
        for (int s : c.sizes) p += s;
        Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(p, p);
        std::vector<int> truth;
        int off = 0;
        for (std::size_t b = 0; b < c.sizes.size(); ++b) {
            for (int i = 0; i < c.sizes[b]; ++i) {
                truth.push_back(static_cast<int>(b) + 1);
                for (int j = 0; j < c.sizes[b]; ++j) {
                    if (i != j) corr(off + i, off + j) = c.r[b];
                }
            }
            off += c.sizes[b];
        }
        double t_true = tefi(corr, truth).tefi;
        for (const auto& assign :
             partitions_into_k(p, static_cast<int>(c.sizes.size()))) {
            if (tefi(corr, assign).tefi < t_true - 1e-12) property_ok = false;
        }
    }

    GeneratorSpec spec = GeneratorSpec::simple(2, 3, 0.8, 0.0, 600, 70707);
    LikertMatrix m = generate(spec);
    CommunityPartition truth;
    truth.assignment = {1, 1, 1, 2, 2, 2};
    truth.n_communities = 2;
    TefiComparison cmp = tefi_bootstrap_test(m, truth, 500, 42);
    bool planted_ok = cmp.base_mean < cmp.comparison_mean && cmp.p_one_tailed < 0.01;
    std::ostringstream os;
    os << "TEFI property: generating partition minimizes TEFI on exhaustive "
          "block-diagonal cases: "
       << (property_ok ? "yes" : "no")
       << "; planted-structure bootstrap p=" << cmp.p_one_tailed << " (want < 0.01)";
    report(7, property_ok && planted_ok, "spec fallback (dataset unavailable)",
           os.str());
}

void criterion_8(const Ctx& ctx) {
    if (ctx.has_data) {
        AssociationMatrix am = association_matrix(ctx.data, CorrMethod::kKendallTauB);
        double min_coef = 1.0;
        int non_sig = 0;
        for (Eigen::Index i = 0; i < am.coefficients.rows(); ++i) {
            for (Eigen::Index j = i + 1; j < am.coefficients.cols(); ++j) {
                min_coef = std::min(min_coef, am.coefficients(i, j));
                if (am.p_values(i, j) >= 0.05) ++non_sig;
            }
        }
        std::ostringstream os;
        os << "Kendall correlogram on dataset: min tau=" << min_coef
           << " (want >= 0), non-significant pairs=" << non_sig << " (want exactly 6)";
        report(8, min_coef >= 0.0 && non_sig == 6, "paper-exact", os.str());
        return;
    }
    // Analogue: positive-manifold data has no negative taus and the
    // significance bookkeeping agrees with the rendered correlogram.
    LikertMatrix m = mas_like_data(324, 80808, 0.45);
    AssociationMatrix am = association_matrix(m, CorrMethod::kKendallTauB);
    double min_coef = 1.0;
    for (Eigen::Index i = 0; i < am.coefficients.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < am.coefficients.cols(); ++j) {
            min_coef = std::min(min_coef, am.coefficients(i, j));
        }
    }
    bool positive_ok = min_coef >= 0.0;

    // Weak-link variant: two nearly independent blocks produce
    // non-significant pairs; the SVG blanks must match the p-matrix count.
    GeneratorSpec weak = GeneratorSpec::simple(2, 5, 0.8, 0.03, 324, 80809);
    LikertMatrix wm = generate(weak);
    AssociationMatrix wam = association_matrix(wm, CorrMethod::kKendallTauB);
    int non_sig = 0;
    for (Eigen::Index i = 0; i < wam.coefficients.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < wam.coefficients.cols(); ++j) {
            if (wam.p_values(i, j) >= 0.05) ++non_sig;
        }
    }
    std::string svg = svg_correlogram(wam);
    int blanks = 0;
    std::size_t pos = 0;
    while ((pos = svg.find("#ffffff", pos)) != std::string::npos) {
        ++blanks;
        pos += 7;
    }
    bool blanks_ok = non_sig > 0 && blanks == 2 * non_sig;
    std::ostringstream os;
    os << "correlogram analogue: positive-manifold min tau=" << min_coef
       << " (want >= 0); weak-link non-significant pairs=" << non_sig
       << ", blank cells=" << blanks << " (want 2x, symmetric); paper-exact "
          "six-pair check runs with --data";
    report(8, positive_ok && blanks_ok, "analogue (dataset unavailable)", os.str());
}

void criterion_9(const Ctx& ctx) {
    if (ctx.has_data && ctx.data.has_cohorts()) {
        Eigen::MatrixXd scores = factor_scores(ctx.data, ctx.reference);
        for (std::size_t f = 0; f < ctx.reference.factor_names.size(); ++f) {
            scores.col(static_cast<Eigen::Index>(f)) /= static_cast<double>(
                ctx.reference.items_of(ctx.reference.factor_names[f]).size());
        }
        std::vector<std::string> cohorts;
        for (const auto& c : ctx.data.cohorts) {
            if (std::find(cohorts.begin(), cohorts.end(), c) == cohorts.end()) {
                cohorts.push_back(c);
            }
        }
        const double want_stat[3] = {0.08, 2.14, 4.3};
        const double want_p[3] = {0.959, 0.343, 0.117};
        bool ok = true;
        std::ostringstream os;
        os << "cohort KW on dataset:";
        for (std::size_t f = 0; f < 3; ++f) {
            std::vector<std::vector<double>> groups(cohorts.size());
            for (Eigen::Index r = 0; r < ctx.data.n_respondents(); ++r) {
                auto it = std::find(cohorts.begin(), cohorts.end(),
                                    ctx.data.cohorts[static_cast<std::size_t>(r)]);
                groups[static_cast<std::size_t>(it - cohorts.begin())].push_back(
                    scores(r, static_cast<Eigen::Index>(f)));
            }
            TestResult kw = kruskal_wallis(groups);
            os << " " << ctx.reference.factor_names[f] << ": H=" << kw.statistic
               << " p=" << kw.p;
            if (std::fabs(kw.statistic - want_stat[f]) > 0.05 ||
                std::fabs(kw.p - want_p[f]) > 0.01) {
                ok = false;
            }
        }
        os << " (want 0.08/.959, 2.14/.343, 4.3/.117)";
        report(9, ok, "paper-exact", os.str());
        return;
    }
    // Analogue: frozen hand-oracle statistics plus null / shifted cohort
    // behavior on questionnaire-like data with the paper's group sizes.
    TestResult kw = kruskal_wallis({{1, 2}, {3, 4}, {5, 6}});
    bool hand_ok = std::fabs(kw.statistic - 32.0 / 7.0) < 1e-12 &&
                   std::fabs(kw.p - 0.101701) < 1e-4;
    TestResult an = anova_oneway({{1, 2, 3}, {2, 3, 4}});
    bool anova_ok = std::fabs(an.statistic - 1.5) < 1e-12 &&
                    std::fabs(an.p - 0.287864) < 1e-4;

    LikertMatrix m = mas_like_data(167, 90909, 0.45);
    FactorAllocation ref;
    ref.add("A", {"i1", "i2", "i3", "i4", "i5", "i6", "i7", "i8"});
    ref.add("B", {"i9", "i10", "i11", "i12"});
    ref.add("C", {"i13", "i14", "i15", "i16", "i17"});
    Eigen::MatrixXd scores = factor_scores(m, ref);
    // Cohort sizes mirroring the published groups: 48 / 68 / 51.
    auto groups_for = [&](Eigen::Index col) {
        std::vector<std::vector<double>> groups(3);
        for (Eigen::Index r = 0; r < m.n_respondents(); ++r) {
            int g = r < 48 ? 0 : (r < 116 ? 1 : 2);
            groups[static_cast<std::size_t>(g)].push_back(scores(r, col));
        }
        return groups;
    };
    // Cohorts are exchangeable by construction: no factor should reject.
    bool null_ok = true;
    for (Eigen::Index f = 0; f < 3; ++f) {
        if (kruskal_wallis(groups_for(f)).p < 0.05) null_ok = false;
    }
    // Positive control: shift one cohort hard and expect detection.
    auto shifted = groups_for(0);
    for (double& v : shifted[2]) v += 6.0;
    bool shift_ok = kruskal_wallis(shifted).p < 0.001;
    bool dunn_ok = false;
    for (const auto& d : dunn_bonferroni(shifted)) {
        if (d.group_b == 2 && d.p_adjusted < 0.01) dunn_ok = true;
    }
    std::ostringstream os;
    os << "cohort-test analogue: hand KW 4.5714/.1017 exact: "
       << (hand_ok ? "yes" : "no") << "; hand ANOVA 1.5/.2879 exact: "
       << (anova_ok ? "yes" : "no") << "; exchangeable cohorts (48/68/51) all "
       << "non-significant: " << (null_ok ? "yes" : "no")
       << "; shifted cohort detected (KW+Dunn): "
       << ((shift_ok && dunn_ok) ? "yes" : "no")
       << "; paper-exact 0.08/2.14/4.3 check runs with --data";
    report(9, hand_ok && anova_ok && null_ok && shift_ok && dunn_ok,
           "analogue (dataset unavailable)", os.str());
}

void criterion_10() {
    // (a) GLASSO vs independent slow solver on 100 random problems.
    Rng rng(101010);
    GlassoOptions tight;
    tight.tol = 1e-7;
    tight.inner_tol = 1e-9;
    double worst_kkt = 0.0, worst_gap = 0.0;
    int monotonicity_violations = 0;
    for (int rep = 0; rep < 100; ++rep) {
        int p = 3 + static_cast<int>(rng.uniform_int(4));
        Eigen::MatrixXd s = random_correlation(p, rng, 0.6);
        double lambda = 0.02 + 0.25 * rng.u01();
        PrecisionEstimate est = glasso_fit(s, lambda, tight);
        worst_kkt = std::max(worst_kkt, glasso_kkt_residual(s, est.precision, lambda));
        Eigen::MatrixXd slow = slow_glasso(s, lambda);
        worst_gap = std::max(worst_gap,
                             std::fabs(glasso_objective(s, est.precision, lambda) -
                                       glasso_objective(s, slow, lambda)));
        std::vector<std::string> nodes;
        for (int i = 0; i < p; ++i) nodes.push_back("n" + std::to_string(i));
        PartialCorrelationNetwork net = select_lambda(s, nodes, 500, 0.5, {}, tight);
        monotonicity_violations += net.path_monotonicity_violations;
    }
    bool glasso_ok = worst_kkt <= 1e-5 && worst_gap <= 1e-6 &&
                     monotonicity_violations == 0;

    // (b) Kendall tau vs exhaustive enumeration, 200 random short vectors.
    int tau_checked = 0;
    bool tau_ok = true;
    Rng trng(111);
    while (tau_checked < 200) {
        std::size_t n = 3 + trng.uniform_int(6);
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = 1.0 + static_cast<double>(trng.uniform_int(5));
            y[i] = 1.0 + static_cast<double>(trng.uniform_int(5));
        }
        auto constant = [](const std::vector<double>& v) {
            return std::all_of(v.begin(), v.end(),
                               [&](double t) { return t == v[0]; });
        };
        if (constant(x) || constant(y)) continue;
        double got = kendall_tau_b(x, y).coefficient;
        double c = 0, d = 0, n1 = 0, n2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double dx = x[j] - x[i], dy = y[j] - y[i];
                if (dx == 0) ++n1;
                if (dy == 0) ++n2;
                if (dx != 0 && dy != 0) {
                    if (dx * dy > 0) ++c;
                    else ++d;
                }
            }
        }
        double n0 = static_cast<double>(n) * (n - 1) / 2.0;
        double want = (c - d) / std::sqrt((n0 - n1) * (n0 - n2));
        if (std::fabs(got - want) > 1e-12) tau_ok = false;
        ++tau_checked;
    }

    // (c) Polychoric recovery at rho in {0, 0.3, 0.5, 0.8}, n = 20000.
    bool poly_ok = true;
    double worst_poly = 0.0;
    int poly_seed = 2222;
    for (double rho : {0.0, 0.3, 0.5, 0.8}) {
        GeneratorSpec spec;
        spec.item_ids = {"x", "y"};
        spec.item_factor = {0, 0};
        double loading = std::sqrt(rho);
        spec.loadings = {loading, loading};
        spec.factor_correlations = Eigen::MatrixXd::Identity(1, 1);
        spec.n = 20000;
        spec.seed = static_cast<std::uint64_t>(poly_seed++);
        LikertMatrix m = generate(spec);
        std::vector<int> x(m.n_respondents()), y(m.n_respondents());
        for (Eigen::Index r = 0; r < m.n_respondents(); ++r) {
            x[static_cast<std::size_t>(r)] = m.values(r, 0);
            y[static_cast<std::size_t>(r)] = m.values(r, 1);
        }
        double err = std::fabs(polychoric(x, y) - rho);
        worst_poly = std::max(worst_poly, err);
        if (err > 0.05) poly_ok = false;
    }

    // (d) CFA analytic vs finite-difference gradients, 20 random models.
    bool grad_ok = true;
    double worst_grad = 0.0;
    Rng grng(3333);
    for (int rep = 0; rep < 20; ++rep) {
        int nf = 1 + static_cast<int>(grng.uniform_int(3));
        int per = 2 + static_cast<int>(grng.uniform_int(2));
        std::vector<int> item_factor;
        for (int f = 0; f < nf; ++f) {
            for (int j = 0; j < per; ++j) item_factor.push_back(f);
        }
        Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(nf, nf);
        for (int a = 0; a < nf; ++a) {
            for (int b = a + 1; b < nf; ++b) phi(a, b) = phi(b, a) = 0.3;
        }
        Eigen::MatrixXd x = factor_model_sample(item_factor, 0.65, phi, 300, grng);
        CfaModel model(sample_cov(x), item_factor, nf);
        Eigen::VectorXd theta(model.n_parameters());
        int idx = 0;
        int p = static_cast<int>(item_factor.size());
        for (int i = 0; i < p; ++i) theta(idx++) = 0.5 + 0.2 * grng.u01();
        for (int i = 0; i < p; ++i) theta(idx++) = 0.4 + 0.3 * grng.u01();
        for (int a = 0; a < nf; ++a) {
            for (int b = a + 1; b < nf; ++b) theta(idx++) = 0.25;
        }
        Eigen::VectorXd analytic = model.gradient(theta);
        for (int j = 0; j < model.n_parameters(); ++j) {
            Eigen::VectorXd up = theta, dn = theta;
            up(j) += 1e-6;
            dn(j) -= 1e-6;
            double fd = (model.f_ml(up) - model.f_ml(dn)) / 2e-6;
            double rel = std::fabs(analytic(j) - fd) /
                         std::max(1.0, std::fabs(analytic(j)));
            worst_grad = std::max(worst_grad, rel);
            if (rel > 1e-4) grad_ok = false;
        }
    }

    std::ostringstream os;
    os << "solver properties: glasso KKT max=" << worst_kkt
       << " (want <= 1e-5), objective gap max=" << worst_gap
       << " (want <= 1e-6), path monotone: "
       << (monotonicity_violations == 0 ? "yes" : "no")
       << "; kendall enumeration 200/200 exact: " << (tau_ok ? "yes" : "no")
       << "; polychoric max err=" << worst_poly << " (want <= 0.05)"
       << "; cfa gradient max rel err=" << worst_grad << " (want <= 1e-4)";
    report(10, glasso_ok && tau_ok && poly_ok && grad_ok, "dataset-free", os.str());
}

}  // namespace

int main(int argc, char** argv) {
    std::string data_path;
    std::string cohort_column = "cohort";
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--data" && i + 1 < argc) data_path = argv[++i];
        if (arg == "--cohort-column" && i + 1 < argc) cohort_column = argv[++i];
    }
    if (data_path.empty()) {
        if (const char* env = std::getenv("MAS_IT_CSV")) data_path = env;
    }

    Ctx ctx;
    ctx.cohort_column = cohort_column;
    try {
        ctx.reference =
            load_allocation(std::string(NETPSYCH_DATA_DIR) + "/mas_uk_factors.json");
    } catch (const std::exception& e) {
        std::cerr << "cannot load reference allocation: " << e.what() << "\n";
        return 2;
    }
    if (!data_path.empty()) {
        LoadOptions o;
        o.cohort_column = cohort_column;
        std::vector<std::string> items;
        for (int i = 1; i <= 23; ++i) items.push_back("i" + std::to_string(i));
        o.item_columns = items;
        try {
            ctx.data = load_csv(data_path, o);
            ctx.has_data = true;
            std::cout << "dataset: " << data_path << " (" << ctx.data.n_respondents()
                      << " x " << ctx.data.n_items() << ")\n";
        } catch (const std::exception& e) {
            std::cerr << "failed to load dataset, falling back: " << e.what() << "\n";
        }
    } else {
        std::cout << "dataset: not supplied (--data/MAS_IT_CSV); criteria 3-9 run "
                     "fallbacks/analogues\n";
    }

    criterion_1();
    criterion_2(ctx);
    criterion_3(ctx);
    criterion_4(ctx);
    criterion_5(ctx);
    criterion_6(ctx);
    criterion_7(ctx);
    criterion_8(ctx);
    criterion_9(ctx);
    criterion_10();

    std::cout << (g_failures == 0 ? "all criteria passed"
                                  : std::to_string(g_failures) + " criteria failed")
              << "\n";
    return g_failures == 0 ? 0 : 1;
}
