#include <cmath>

#include "doctest.h"
#include "netpsych/redundancy.hpp"
#include "netpsych/rng.hpp"

using namespace netpsych;

TEST_CASE("wto of isolated nodes is zero") {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
    Eigen::MatrixXd wto = wto_matrix(w);
    CHECK(wto(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("wto matches the hand-computed 3-node example") {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
    w(0, 1) = w(1, 0) = 0.5;
    w(0, 2) = w(2, 0) = 0.4;
    w(1, 2) = w(2, 1) = 0.4;
    Eigen::MatrixXd wto = wto_matrix(w);
    // (0.4*0.4 + 0.5) / (0.9 + 1 - 0.5) = 0.66 / 1.4
    CHECK(wto(0, 1) == doctest::Approx(0.66 / 1.4).epsilon(1e-12));
    CHECK(wto(0, 1) == doctest::Approx(0.4714).epsilon(1e-3));
}

TEST_CASE("wto is symmetric and bounded for |w| <= 1 networks") {
    Rng rng(77);
    for (int rep = 0; rep < 10; ++rep) {
        int p = 4 + static_cast<int>(rng.uniform_int(5));
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(p, p);
        for (int i = 0; i < p; ++i) {
            for (int j = i + 1; j < p; ++j) {
                if (rng.u01() < 0.6) {
                    double v = 2.0 * rng.u01() - 1.0;
                    w(i, j) = w(j, i) = v;
                }
            }
        }
        Eigen::MatrixXd wto = wto_matrix(w);
        CHECK((wto - wto.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(wto.minCoeff() >= 0.0);
        CHECK(wto.maxCoeff() <= 1.0 + 1e-12);
    }
}

TEST_CASE("strengthening the direct edge never lowers pairwise wto") {
    Rng rng(13);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(5, 5);
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) {
            double v = rng.u01() * 0.5;
            w(i, j) = w(j, i) = v;
        }
    }
    double prev = 0.0;
    for (double edge = 0.0; edge <= 0.9; edge += 0.1) {
        w(0, 1) = w(1, 0) = edge;
        double v = wto_matrix(w)(0, 1);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("flag_redundant bands are exhaustive and non-overlapping") {
    Eigen::MatrixXd wto = Eigen::MatrixXd::Zero(5, 5);
    auto set = [&](int i, int j, double v) { wto(i, j) = wto(j, i) = v; };
    set(0, 1, 0.35);
    set(0, 2, 0.27);
    set(1, 2, 0.22);
    set(2, 3, 0.205);
    set(3, 4, 0.12);  // below the flag threshold
    std::vector<std::string> items = {"a", "b", "c", "d", "e"};
    RedundancyReport report = flag_redundant(wto, items);
    CHECK(report.pairs.size() == 4);
    // Sorted descending.
    for (std::size_t i = 1; i < report.pairs.size(); ++i) {
        CHECK(report.pairs[i - 1].wto >= report.pairs[i].wto);
    }
    CHECK(report.conservative().size() == 1);
    CHECK(report.conservative()[0].item_a == "a");
    CHECK(report.moderate().size() == 1);
    CHECK(report.small_to_moderate().size() == 2);
    CHECK(report.conservative().size() + report.moderate().size() +
              report.small_to_moderate().size() ==
          report.pairs.size());
}

TEST_CASE("all-zero network produces an empty report") {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(4, 4);
    RedundancyReport report =
        flag_redundant(wto_matrix(w), {"a", "b", "c", "d"});
    CHECK(report.pairs.empty());
}
