#include "doctest.h"
#include "netpsych/exports.hpp"
#include "netpsych/simulate.hpp"

using namespace netpsych;

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("The quick brown fox jumps over the lazy dog") ==
          "d7a8fbb307d7809469ca9abcb0082e4f8d5651e46d3cdb762d02d0bf37c9e592");
    // Padding boundary (55/56/64 byte messages).
    CHECK(sha256_hex(std::string(55, 'a')) ==
          "9f4390f8d30c2dd92ec9f095b65e2b9ae9b0a925a5258e241c9f1e910f734318");
    CHECK(sha256_hex(std::string(64, 'a')) ==
          "ffe054fe7ae0cb6dc65c3af9b61d5209f439851db43d0ba5997337df154668eb");
}

TEST_CASE("json emitters are deterministic") {
    GeneratorSpec spec = GeneratorSpec::simple(2, 3, 0.6, 0.2, 200, 42);
    LikertMatrix m = generate(spec);
    AssociationMatrix am = association_matrix(m, CorrMethod::kKendallTauB);
    CHECK(to_json(am) == to_json(am));
    CHECK(!to_json(describe(m)).empty());
}

TEST_CASE("correlogram svg blanks non-significant cells") {
    Eigen::MatrixXd coef(2, 2), p(2, 2);
    coef << 1.0, 0.8, 0.8, 1.0;
    p << 0.0, 0.3, 0.3, 0.0;  // off-diagonal not significant
    std::string svg = svg_correlogram(coef, p, {"a", "b"}, {"a", "b"}, 0.05);
    CHECK(svg.find("#ffffff") != std::string::npos);  // blank cell
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);

    // Significant everywhere: no blank cells.
    p << 0.0, 0.001, 0.001, 0.0;
    std::string svg2 = svg_correlogram(coef, p, {"a", "b"}, {"a", "b"}, 0.05);
    CHECK(svg2.find("#ffffff") == std::string::npos);
}

TEST_CASE("dot and graphml exports carry nodes and weighted edges") {
    PartialCorrelationNetwork net;
    net.nodes = {"x", "y", "z"};
    net.weights = Eigen::MatrixXd::Zero(3, 3);
    net.weights(0, 1) = net.weights(1, 0) = 0.42;
    CommunityPartition part;
    part.assignment = {1, 1, 2};
    part.n_communities = 2;

    std::string dot = to_dot(net, &part);
    CHECK(dot.find("\"x\" -- \"y\"") != std::string::npos);
    CHECK(dot.find("0.42") != std::string::npos);
    CHECK(dot.find("fillcolor") != std::string::npos);
    CHECK(dot.find("\"z\"") != std::string::npos);

    std::string gml = to_graphml(net);
    CHECK(gml.find("<node id=\"z\"/>") != std::string::npos);
    CHECK(gml.find("<data key=\"w\">0.42</data>") != std::string::npos);
    CHECK(gml.find("edgedefault=\"undirected\"") != std::string::npos);
}

TEST_CASE("boxplot svg marks outliers with empty dots") {
    std::vector<std::string> groups = {"g1", "g2"};
    BoxSeries series;
    series.label = "s";
    series.groups = {{1, 2, 2, 3, 2, 2, 3, 2, 30}, {4, 5, 6, 5, 4, 6}};
    std::string svg = svg_boxplot(groups, {series}, "score");
    CHECK(svg.find("fill=\"none\"") != std::string::npos);  // outlier dot
    CHECK(svg.find("g1") != std::string::npos);
    CHECK(svg.find("score") != std::string::npos);
}

TEST_CASE("stability bars svg renders one bar per item") {
    BootstrapResult boot;
    boot.items = {"a", "b", "c"};
    boot.median_structure.assignment = {1, 1, 2};
    boot.median_structure.n_communities = 2;
    boot.item_stability = {{"a", 1.0}, {"b", 0.8}, {"c", 0.53}};
    std::string svg = svg_stability_bars(boot);
    CHECK(svg.find(">a</text>") != std::string::npos);
    CHECK(svg.find(">c</text>") != std::string::npos);
    // Exactly three bars (one rect per item beyond the gridline rects).
    std::size_t bars = 0, pos = 0;
    while ((pos = svg.find("<rect", pos)) != std::string::npos) {
        ++bars;
        pos += 5;
    }
    CHECK(bars == 3);
}
