#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "netpsych/likert.hpp"
#include "netpsych/rng.hpp"

using namespace netpsych;
namespace fs = std::filesystem;

namespace {

struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& content) {
        path = fs::temp_directory_path() /
               ("netpsych_test_" + std::to_string(std::rand()) + ".csv");
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::error_code ec; fs::remove(path, ec); }
};

LikertMatrix make_matrix(std::initializer_list<std::initializer_list<int>> rows,
                         std::vector<std::string> ids) {
    LikertMatrix m;
    m.item_ids = std::move(ids);
    m.values.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(m.item_ids.size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (int v : row) m.values(r, c++) = v;
        ++r;
    }
    return m;
}

}  // namespace

TEST_CASE("load_csv on a minimal well-formed file") {
    TempFile f("a,b\n1,5\n2,4\n3,3\n");
    LoadReport report;
    LikertMatrix m = load_csv(f.path.string(), {}, &report);
    CHECK(m.n_respondents() == 3);
    CHECK(m.n_items() == 2);
    CHECK(m.item_ids == std::vector<std::string>{"a", "b"});
    CHECK(!m.has_cohorts());
    CHECK(report.n_rows_read == 3);
    CHECK(report.n_rows_dropped == 0);
}

TEST_CASE("load_csv drops out-of-range rows under listwise policy") {
    TempFile f("a,b\n1,5\n6,2\n3,3\n2,2\n");
    LoadReport report;
    LikertMatrix m = load_csv(f.path.string(), {}, &report);
    CHECK(m.n_respondents() == 3);
    CHECK(report.n_rows_dropped == 1);
    REQUIRE(report.dropped_rows.size() == 1);
    CHECK(report.dropped_rows[0] == 1);
    // Histograms cover only kept rows.
    long total = 0;
    for (long c : report.histograms.at("a")) total += c;
    CHECK(total == 3);
}

TEST_CASE("load_csv strict mode and error paths") {
    TempFile bad_value("a,b\n1,2\nx,3\n2,2\n3,3\n");
    LoadOptions strict;
    strict.missing = LoadOptions::MissingPolicy::kStrict;
    CHECK_THROWS_AS(load_csv(bad_value.path.string(), strict), DataError);
    // Listwise: the non-integer row is dropped instead.
    LikertMatrix m = load_csv(bad_value.path.string(), {});
    CHECK(m.n_respondents() == 3);

    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", {}), DataError);

    TempFile all_bad("a,b\n9,9\n0,0\n");
    CHECK_THROWS_AS(load_csv(all_bad.path.string(), {}), DataError);

    TempFile only_cohort("year\n2023\n2024\n2025\n");
    LoadOptions with_cohort;
    with_cohort.cohort_column = "year";
    CHECK_THROWS_AS(load_csv(only_cohort.path.string(), with_cohort), DataError);
}

TEST_CASE("load_csv cohorts and item selection by prefix") {
    TempFile f("q1,q2,other,year\n1,2,3,2023\n2,3,4,2024\n3,4,5,2024\n");
    LoadOptions o;
    o.item_prefix = "q";
    o.cohort_column = "year";
    LikertMatrix m = load_csv(f.path.string(), o);
    CHECK(m.item_ids == std::vector<std::string>{"q1", "q2"});
    REQUIRE(m.has_cohorts());
    CHECK(m.cohorts == std::vector<std::string>{"2023", "2024", "2024"});
}

TEST_CASE("describe matches hand arithmetic") {
    LikertMatrix m = make_matrix({{3, 1, 1}, {3, 2, 1}, {3, 3, 5}, {3, 4, 1}, {3, 5, 1}},
                                 {"const3", "ladder", "mixed"});
    auto d = describe(m);
    REQUIRE(d.size() == 3);

    CHECK(d[0].mean == doctest::Approx(3.0));
    CHECK(d[0].sd == doctest::Approx(0.0));
    CHECK(d[0].median == doctest::Approx(3.0));
    CHECK(d[0].min == 3);
    CHECK(d[0].max == 3);

    CHECK(d[1].mean == doctest::Approx(3.0));
    CHECK(d[1].sd == doctest::Approx(std::sqrt(10.0 / 4.0)).epsilon(1e-12));
    CHECK(d[1].median == doctest::Approx(3.0));

    LikertMatrix m2 = make_matrix({{1, 1}, {1, 1}, {5, 1}}, {"x", "y"});
    auto d2 = describe(m2);
    CHECK(d2[0].mean == doctest::Approx(7.0 / 3.0).epsilon(1e-9));
    CHECK(d2[0].median == doctest::Approx(1.0));
}

TEST_CASE("describe is row-permutation invariant") {
    LikertMatrix m = make_matrix({{1, 4}, {2, 3}, {5, 2}, {4, 1}, {3, 3}}, {"a", "b"});
    LikertMatrix shuffled = m;
    std::vector<Eigen::Index> order = {4, 0, 3, 1, 2};
    for (std::size_t i = 0; i < order.size(); ++i) {
        shuffled.values.row(static_cast<Eigen::Index>(i)) = m.values.row(order[i]);
    }
    auto d1 = describe(m);
    auto d2 = describe(shuffled);
    for (std::size_t i = 0; i < d1.size(); ++i) {
        CHECK(d1[i].mean == d2[i].mean);
        CHECK(d1[i].sd == d2[i].sd);
        CHECK(d1[i].median == d2[i].median);
    }
}

TEST_CASE("factor_scores sums responses per factor") {
    std::vector<std::string> ids;
    for (int i = 1; i <= 23; ++i) ids.push_back("i" + std::to_string(i));
    LikertMatrix m;
    m.item_ids = ids;
    m.values = Eigen::MatrixXi::Ones(3, 23);
    m.values.row(1).setConstant(5);

    FactorAllocation all_in_one;
    all_in_one.add("all", ids);
    Eigen::MatrixXd s = factor_scores(m, all_in_one);
    CHECK(s(0, 0) == doctest::Approx(23.0));
    CHECK(s(1, 0) == doctest::Approx(115.0));

    FactorAllocation pair;
    pair.add("f", {"i1", "i2"});
    m.values(0, 0) = 2;
    m.values(0, 1) = 5;
    CHECK(factor_scores(m, pair)(0, 0) == doctest::Approx(7.0));

    FactorAllocation triple;
    triple.add("f", {"i1", "i2", "i3"});
    CHECK(factor_scores(m, triple)(1, 0) == doctest::Approx(15.0));

    FactorAllocation bad;
    bad.add("f", {"i1", "nope"});
    CHECK_THROWS_AS(factor_scores(m, bad), DataError);
}

TEST_CASE("factor_scores is additive over disjoint factors") {
    Rng rng(99);
    LikertMatrix m;
    m.item_ids = {"a", "b", "c", "d"};
    m.values.resize(20, 4);
    for (Eigen::Index r = 0; r < 20; ++r) {
        for (Eigen::Index c = 0; c < 4; ++c) {
            m.values(r, c) = 1 + static_cast<int>(rng.uniform_int(5));
        }
    }
    FactorAllocation split;
    split.add("A", {"a", "b"});
    split.add("B", {"c", "d"});
    FactorAllocation merged;
    merged.add("AB", {"a", "b", "c", "d"});
    Eigen::MatrixXd s_split = factor_scores(m, split);
    Eigen::MatrixXd s_merged = factor_scores(m, merged);
    for (Eigen::Index r = 0; r < 20; ++r) {
        CHECK(s_split(r, 0) + s_split(r, 1) == doctest::Approx(s_merged(r, 0)));
    }
}

TEST_CASE("cohort_summaries") {
    LikertMatrix m = make_matrix({{2, 2}, {2, 2}, {2, 2}}, {"a", "b"});
    m.cohorts = {"x", "x", "x"};
    FactorAllocation alloc;
    alloc.add("f", {"a", "b"});
    auto s = cohort_summaries(m, alloc);
    REQUIRE(s.size() == 1);
    CHECK(s[0].n == 3);
    CHECK(s[0].factor_means.at("f") == doctest::Approx(2.0));

    // Two cohorts with identical rows give identical summaries.
    LikertMatrix m2 = make_matrix({{1, 4}, {3, 2}, {1, 4}, {3, 2}}, {"a", "b"});
    m2.cohorts = {"u", "u", "v", "v"};
    auto s2 = cohort_summaries(m2, alloc);
    REQUIRE(s2.size() == 2);
    CHECK(s2[0].factor_means.at("f") == doctest::Approx(s2[1].factor_means.at("f")));
    CHECK(s2[0].item_means == s2[1].item_means);

    LikertMatrix no_cohort = make_matrix({{1, 1}, {2, 2}, {3, 3}}, {"a", "b"});
    CHECK_THROWS_AS(cohort_summaries(no_cohort, alloc), DataError);
}

TEST_CASE("csv round-trip reproduces the matrix bit-for-bit") {
    Rng rng(5);
    LikertMatrix m;
    m.item_ids = {"i1", "i2", "i3"};
    m.values.resize(17, 3);
    for (Eigen::Index r = 0; r < 17; ++r) {
        for (Eigen::Index c = 0; c < 3; ++c) {
            m.values(r, c) = 1 + static_cast<int>(rng.uniform_int(5));
        }
        m.cohorts.push_back(r % 2 == 0 ? "even" : "odd");
    }
    fs::path path = fs::temp_directory_path() / "netpsych_roundtrip.csv";
    write_csv(m, path.string());
    LoadOptions o;
    o.cohort_column = "cohort";
    LikertMatrix back = load_csv(path.string(), o);
    fs::remove(path);
    CHECK(back.values == m.values);
    CHECK(back.item_ids == m.item_ids);
    CHECK(back.cohorts == m.cohorts);
}

TEST_CASE("validate rejects invariant violations") {
    LikertMatrix tiny = make_matrix({{1, 2}, {2, 1}}, {"a", "b"});
    CHECK_THROWS_AS(tiny.validate(), DataError);  // fewer than 3 respondents

    LikertMatrix dup = make_matrix({{1, 2}, {2, 1}, {1, 1}}, {"a", "a"});
    CHECK_THROWS_AS(dup.validate(), DataError);

    LikertMatrix range = make_matrix({{1, 2}, {2, 9}, {1, 1}}, {"a", "b"});
    CHECK_THROWS_AS(range.validate(), DataError);

    LikertMatrix ok = make_matrix({{1, 2}, {2, 1}, {1, 1}}, {"a", "b"});
    CHECK_NOTHROW(ok.validate());
    ok.cohorts = {"x"};
    CHECK_THROWS_AS(ok.validate(), DataError);
}
