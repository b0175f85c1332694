"""Network psychometrics toolkit: Likert ingestion, ordinal correlations,
EBIC-GLASSO networks, community detection, EGA, bootstrap stability,
redundancy (wTO), entropy fit, CFA, and nonparametric group tests.

The heavy lifting lives in the compiled extension `_netpsych`; build it with
CMake and put the build's `bindings/` directory on PYTHONPATH (see the
project README).
"""

from _netpsych import (  # noqa: F401
    AssociationMatrix,
    BootstrapResult,
    CfaFit,
    CommunityPartition,
    ConfigError,
    DataError,
    DunnResult,
    EgaResult,
    ItemDescriptives,
    LikertMatrix,
    NumericError,
    PartialCorrelationNetwork,
    TefiComparison,
    TestResult,
    anova_oneway,
    association_matrix,
    boot_ega,
    describe,
    dunn_bonferroni,
    factor_scores,
    fit_cfa,
    glasso,
    jaccard_matrix,
    kendall_tau_b,
    kruskal_wallis,
    load_csv,
    louvain,
    modularity,
    nearest_positive_definite,
    polychoric,
    run_ega,
    select_network,
    simulate,
    tefi,
    tefi_bootstrap_test,
    walktrap,
    wto_matrix,
)

__version__ = "0.1.0"
