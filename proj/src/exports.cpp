#include "netpsych/exports.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace netpsych {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Diverging blue-white-red scale for correlations in [-1, 1].
std::string corr_color(double v) {
    double t = std::clamp((v + 1.0) / 2.0, 0.0, 1.0);
    int r, g, b;
    if (t < 0.5) {
        double u = t / 0.5;
        r = static_cast<int>(33 + u * (255 - 33));
        g = static_cast<int>(102 + u * (255 - 102));
        b = static_cast<int>(172 + u * (255 - 172));
    } else {
        double u = (t - 0.5) / 0.5;
        r = static_cast<int>(255 - u * (255 - 178));
        g = static_cast<int>(255 - u * (255 - 24));
        b = static_cast<int>(255 - u * (255 - 43));
    }
    std::ostringstream os;
    os << "#" << std::hex << std::setw(2) << std::setfill('0') << r << std::setw(2)
       << g << std::setw(2) << b;
    return os.str();
}

const std::array<const char*, 8> kPalette = {
    "#4c78a8", "#f58518", "#54a24b", "#e45756",
    "#72b7b2", "#eeca3b", "#b279a2", "#9d755d"};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

struct Quartiles {
    double q1, median, q3, lo_whisker, hi_whisker;
    std::vector<double> outliers;
};

double quantile_sorted(const std::vector<double>& v, double q) {
    if (v.empty()) return 0.0;
    double pos = q * (static_cast<double>(v.size()) - 1.0);
    std::size_t i = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(i);
    if (i + 1 < v.size()) return v[i] * (1.0 - frac) + v[i + 1] * frac;
    return v[i];
}

Quartiles quartiles(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    Quartiles q;
    q.q1 = quantile_sorted(v, 0.25);
    q.median = quantile_sorted(v, 0.5);
    q.q3 = quantile_sorted(v, 0.75);
    double iqr = q.q3 - q.q1;
    double lo_fence = q.q1 - 1.5 * iqr;
    double hi_fence = q.q3 + 1.5 * iqr;
    q.lo_whisker = q.q3;
    q.hi_whisker = q.q1;
    bool any = false;
    for (double x : v) {
        if (x >= lo_fence && x <= hi_fence) {
            if (!any) {
                q.lo_whisker = q.hi_whisker = x;
                any = true;
            } else {
                q.lo_whisker = std::min(q.lo_whisker, x);
                q.hi_whisker = std::max(q.hi_whisker, x);
            }
        } else {
            q.outliers.push_back(x);
        }
    }
    return q;
}

// ---- SHA-256 (FIPS 180-4), enough for the artifact manifest. ----

struct Sha256 {
    std::array<std::uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372,
                                      0xa54ff53a, 0x510e527f, 0x9b05688c,
                                      0x1f83d9ab, 0x5be0cd19};
    static constexpr std::array<std::uint32_t, 64> k = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
        0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
        0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
        0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
        0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
        0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
        0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
        0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
        0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
        0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

    static std::uint32_t rotr(std::uint32_t x, int n) {
        return (x >> n) | (x << (32 - n));
    }

    void block(const unsigned char* p) {
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i) {
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        }
        for (int i = 16; i < 64; ++i) {
            std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        auto [a, b, c, d, e, f, g, hh] = std::tuple(h[0], h[1], h[2], h[3], h[4], h[5],
                                                    h[6], h[7]);
        for (int i = 0; i < 64; ++i) {
            std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            std::uint32_t ch = (e & f) ^ (~e & g);
            std::uint32_t t1 = hh + s1 + ch + k[i] + w[i];
            std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            std::uint32_t t2 = s0 + maj;
            hh = g; g = f; f = e; e = d + t1;
            d = c; c = b; b = a; a = t1 + t2;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d;
        h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
    }
};

}  // namespace

std::string sha256_hex(const std::string& data) {
    Sha256 ctx;
    std::uint64_t bitlen = static_cast<std::uint64_t>(data.size()) * 8;
    std::string padded = data;
    padded += static_cast<char>(0x80);
    while (padded.size() % 64 != 56) padded += '\0';
    for (int i = 7; i >= 0; --i) {
        padded += static_cast<char>((bitlen >> (8 * i)) & 0xff);
    }
    for (std::size_t off = 0; off < padded.size(); off += 64) {
        ctx.block(reinterpret_cast<const unsigned char*>(padded.data() + off));
    }
    std::ostringstream os;
    for (std::uint32_t v : ctx.h) {
        os << std::hex << std::setw(8) << std::setfill('0') << v;
    }
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
}

std::string to_json(const LoadReport& report) {
    json j;
    j["n_rows_read"] = report.n_rows_read;
    j["n_rows_kept"] = report.n_rows_kept;
    j["n_rows_dropped"] = report.n_rows_dropped;
    j["dropped_rows"] = report.dropped_rows;
    j["histograms"] = report.histograms;
    return dump(j);
}

std::string to_json(const std::vector<ItemDescriptives>& descriptives) {
    json arr = json::array();
    for (const auto& d : descriptives) {
        json j;
        j["item_id"] = d.item_id;
        j["mean"] = d.mean;
        j["sd"] = d.sd;
        j["median"] = d.median;
        j["min"] = d.min;
        j["max"] = d.max;
        j["n"] = d.n;
        arr.push_back(std::move(j));
    }
    return dump(arr);
}

std::string to_json(const AssociationMatrix& matrix) {
    json j;
    j["items"] = matrix.item_ids;
    j["method"] = to_string(matrix.method);
    j["n_used"] = matrix.n_used;
    j["coefficients"] = matrix_to_json(matrix.coefficients);
    j["p_values"] = matrix_to_json(matrix.p_values);
    return dump(j);
}

std::string to_json(const PartialCorrelationNetwork& network) {
    json j;
    j["nodes"] = network.nodes;
    j["lambda"] = network.lambda_selected;
    j["ebic"] = network.ebic;
    j["gamma"] = network.gamma;
    j["n_edges"] = network.n_edges();
    j["weights"] = matrix_to_json(network.weights);
    return dump(j);
}

std::string partition_json(const CommunityPartition& partition,
                           const std::vector<std::string>& items) {
    json j;
    json assignment;
    for (std::size_t i = 0; i < items.size(); ++i) {
        assignment[items[i]] = partition.assignment[i];
    }
    j["assignment"] = std::move(assignment);
    j["n_communities"] = partition.n_communities;
    j["modularity"] = partition.modularity;
    return dump(j);
}

std::string jaccard_json(const Eigen::MatrixXd& jaccard,
                         const std::vector<std::string>& rows,
                         const std::vector<std::string>& cols) {
    json j;
    j["rows"] = rows;
    j["cols"] = cols;
    j["jaccard"] = matrix_to_json(jaccard);
    return dump(j);
}

std::string to_json(const BootstrapResult& result) {
    json j;
    j["n_replications"] = result.n_replications;
    j["n_successful"] = result.n_successful;
    j["seed"] = result.seed;
    j["mode"] = result.mode == BootMode::kNonparametric ? "nonparametric" : "parametric";
    json freq;
    for (const auto& [k, v] : result.dimension_frequencies) {
        freq[std::to_string(k)] = v;
    }
    j["dimension_frequencies"] = std::move(freq);
    json med;
    for (std::size_t i = 0; i < result.items.size(); ++i) {
        med[result.items[i]] = result.median_structure.assignment[i];
    }
    j["median_structure"] = std::move(med);
    j["median_n_communities"] = result.median_structure.n_communities;
    j["item_stability"] = result.item_stability;
    return dump(j);
}

std::string to_json(const TefiComparison& comparison) {
    json j;
    j["base_mean"] = comparison.base_mean;
    j["base_sd"] = comparison.base_sd;
    j["comparison_mean"] = comparison.comparison_mean;
    j["comparison_sd"] = comparison.comparison_sd;
    j["p_one_tailed"] = comparison.p_one_tailed;
    j["n_draws"] = comparison.n_draws;
    return dump(j);
}

std::string to_json(const CfaFit& fit) {
    json j;
    j["loadings"] = fit.loadings;
    j["residual_variances"] = fit.residual_variances;
    j["factor_names"] = fit.factor_names;
    j["factor_correlations"] = matrix_to_json(fit.factor_correlations);
    j["chi_square"] = fit.chi_square;
    j["df"] = fit.df;
    j["p"] = fit.p;
    j["cfi"] = fit.cfi;
    j["rmsea"] = fit.rmsea;
    j["srmr"] = fit.srmr;
    j["baseline_chi_square"] = fit.baseline_chi_square;
    j["baseline_df"] = fit.baseline_df;
    j["converged"] = fit.converged;
    j["heywood"] = fit.heywood;
    j["n"] = fit.n;
    return dump(j);
}

std::string to_json(const TestResult& result) {
    json j;
    j["test"] = result.test;
    j["statistic"] = result.statistic;
    j["p"] = result.p;
    j["df1"] = result.df1;
    j["df2"] = result.df2;
    j["group_sizes"] = result.group_sizes;
    j["degenerate"] = result.degenerate;
    return dump(j);
}

std::string tests_json(const std::vector<TestResult>& kw,
                       const std::vector<TestResult>& anova,
                       const std::vector<std::vector<DunnResult>>& dunn,
                       const std::vector<std::string>& labels,
                       const std::vector<std::vector<std::string>>& group_names) {
    json arr = json::array();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        json j;
        j["label"] = labels[i];
        j["groups"] = group_names[i];
        j["kruskal_wallis"] = {{"statistic", kw[i].statistic},
                               {"p", kw[i].p},
                               {"df", kw[i].df1},
                               {"degenerate", kw[i].degenerate}};
        j["anova"] = {{"statistic", anova[i].statistic},
                      {"p", anova[i].p},
                      {"df1", anova[i].df1},
                      {"df2", anova[i].df2}};
        json pairs = json::array();
        for (const auto& d : dunn[i]) {
            pairs.push_back({{"group_a", group_names[i][d.group_a]},
                             {"group_b", group_names[i][d.group_b]},
                             {"z", d.z},
                             {"p_unadjusted", d.p_unadjusted},
                             {"p_adjusted", d.p_adjusted}});
        }
        j["dunn_bonferroni"] = std::move(pairs);
        arr.push_back(std::move(j));
    }
    return dump(arr);
}

std::string to_json(const RedundancyReport& report) {
    json j;
    j["flag_threshold"] = report.flag_threshold;
    j["conservative_threshold"] = report.conservative_threshold;
    auto band = [](const std::vector<RedundantPair>& pairs) {
        json arr = json::array();
        for (const auto& p : pairs) {
            arr.push_back({{"item_a", p.item_a}, {"item_b", p.item_b}, {"wto", p.wto}});
        }
        return arr;
    };
    j["pairs"] = band(report.pairs);
    j["bands"] = {{"conservative", band(report.conservative())},
                  {"moderate", band(report.moderate())},
                  {"small_to_moderate", band(report.small_to_moderate())}};
    return dump(j);
}

std::string redundancy_markdown(const RedundancyReport& report) {
    std::ostringstream os;
    os << "| item A | item B | wTO | band |\n|---|---|---|---|\n";
    for (const auto& p : report.pairs) {
        std::string b = p.wto >= report.conservative_threshold ? "conservative (>= 0.30)"
                        : p.wto >= 0.25                        ? "moderate"
                                                               : "small-to-moderate";
        os << "| " << p.item_a << " | " << p.item_b << " | " << fmt(p.wto) << " | "
           << b << " |\n";
    }
    return os.str();
}

std::string to_dot(const PartialCorrelationNetwork& network,
                   const CommunityPartition* partition) {
    std::ostringstream os;
    os << "graph network {\n  node [style=filled];\n";
    for (std::size_t i = 0; i < network.nodes.size(); ++i) {
        os << "  \"" << network.nodes[i] << "\"";
        if (partition) {
            int c = partition->assignment[i];
            os << " [fillcolor=\"" << kPalette[(c - 1) % kPalette.size()] << "\"]";
        }
        os << ";\n";
    }
    for (Eigen::Index i = 0; i < network.weights.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < network.weights.cols(); ++j) {
            double w = network.weights(i, j);
            if (w == 0.0) continue;
            os << "  \"" << network.nodes[static_cast<std::size_t>(i)] << "\" -- \""
               << network.nodes[static_cast<std::size_t>(j)] << "\" [weight="
               << fmt(w) << ", penwidth=" << fmt(std::max(0.3, std::fabs(w) * 8.0))
               << "];\n";
        }
    }
    os << "}\n";
    return os.str();
}

std::string to_graphml(const PartialCorrelationNetwork& network) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
       << "  <key id=\"w\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
       << "  <graph id=\"network\" edgedefault=\"undirected\">\n";
    for (const auto& node : network.nodes) {
        os << "    <node id=\"" << node << "\"/>\n";
    }
    int edge_id = 0;
    for (Eigen::Index i = 0; i < network.weights.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < network.weights.cols(); ++j) {
            double w = network.weights(i, j);
            if (w == 0.0) continue;
            os << "    <edge id=\"e" << edge_id++ << "\" source=\""
               << network.nodes[static_cast<std::size_t>(i)] << "\" target=\""
               << network.nodes[static_cast<std::size_t>(j)] << "\"><data key=\"w\">"
               << fmt(w) << "</data></edge>\n";
        }
    }
    os << "  </graph>\n</graphml>\n";
    return os.str();
}

std::string svg_correlogram(const Eigen::MatrixXd& coefficients,
                            const Eigen::MatrixXd& p_values,
                            const std::vector<std::string>& row_labels,
                            const std::vector<std::string>& col_labels,
                            double alpha) {
    const Eigen::Index nr = coefficients.rows();
    const Eigen::Index nc = coefficients.cols();
    const int cell = 22, margin = 70;
    const int width = margin + cell * static_cast<int>(nc) + 20;
    const int height = margin + cell * static_cast<int>(nr) + 20;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"9\">\n";
    for (Eigen::Index i = 0; i < nr; ++i) {
        os << "<text x=\"" << margin - 4 << "\" y=\""
           << margin + cell * static_cast<int>(i) + cell / 2 + 3
           << "\" text-anchor=\"end\">" << row_labels[static_cast<std::size_t>(i)]
           << "</text>\n";
    }
    for (Eigen::Index j = 0; j < nc; ++j) {
        int x = margin + cell * static_cast<int>(j) + cell / 2;
        os << "<text x=\"" << x << "\" y=\"" << margin - 6
           << "\" text-anchor=\"middle\">" << col_labels[static_cast<std::size_t>(j)]
           << "</text>\n";
    }
    for (Eigen::Index i = 0; i < nr; ++i) {
        for (Eigen::Index j = 0; j < nc; ++j) {
            int x = margin + cell * static_cast<int>(j);
            int y = margin + cell * static_cast<int>(i);
            bool same_cell = row_labels == col_labels && i == j;
            // Non-significant cells render blank.
            bool blank = !same_cell && p_values(i, j) >= alpha;
            os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
               << "\" height=\"" << cell << "\" stroke=\"#cccccc\" fill=\""
               << (blank ? "#ffffff" : corr_color(coefficients(i, j))) << "\"/>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

std::string svg_correlogram(const AssociationMatrix& matrix, double alpha) {
    return svg_correlogram(matrix.coefficients, matrix.p_values, matrix.item_ids,
                           matrix.item_ids, alpha);
}

std::string svg_boxplot(const std::vector<std::string>& group_labels,
                        const std::vector<BoxSeries>& series,
                        const std::string& y_label) {
    const int width = 640, height = 420, ml = 60, mr = 20, mt = 40, mb = 60;
    double lo = 1e300, hi = -1e300;
    for (const auto& s : series) {
        for (const auto& g : s.groups) {
            for (double v : g) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (lo > hi) { lo = 0.0; hi = 1.0; }
    double pad = (hi - lo) * 0.08 + 1e-9;
    lo -= pad;
    hi += pad;
    auto ypix = [&](double v) {
        return mt + (height - mt - mb) * (1.0 - (v - lo) / (hi - lo));
    };

    const std::size_t ng = group_labels.size();
    const std::size_t ns = series.size();
    double slot = static_cast<double>(width - ml - mr) / static_cast<double>(ng);
    double box_w = std::min(34.0, slot / (static_cast<double>(ns) + 0.8));

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<text x=\"14\" y=\"" << (mt + height - mb) / 2
       << "\" transform=\"rotate(-90 14 " << (mt + height - mb) / 2 << ")\" "
       << "text-anchor=\"middle\">" << y_label << "</text>\n";
    // y axis ticks
    for (int t = 0; t <= 4; ++t) {
        double v = lo + (hi - lo) * t / 4.0;
        double y = ypix(v);
        os << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << width - mr
           << "\" y2=\"" << y << "\" stroke=\"#eeeeee\"/>\n";
        os << "<text x=\"" << ml - 6 << "\" y=\"" << y + 4
           << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
    }
    for (std::size_t g = 0; g < ng; ++g) {
        double cx = ml + slot * (static_cast<double>(g) + 0.5);
        os << "<text x=\"" << cx << "\" y=\"" << height - mb + 18
           << "\" text-anchor=\"middle\">" << group_labels[g] << "</text>\n";
        for (std::size_t s = 0; s < ns; ++s) {
            if (g >= series[s].groups.size() || series[s].groups[g].empty()) continue;
            Quartiles q = quartiles(series[s].groups[g]);
            double x = cx + box_w * (static_cast<double>(s) -
                                     static_cast<double>(ns - 1) / 2.0) -
                       box_w / 2.0;
            const char* color = kPalette[s % kPalette.size()];
            os << "<line x1=\"" << x + box_w / 2 << "\" y1=\"" << ypix(q.lo_whisker)
               << "\" x2=\"" << x + box_w / 2 << "\" y2=\"" << ypix(q.hi_whisker)
               << "\" stroke=\"#555555\"/>\n";
            os << "<rect x=\"" << x << "\" y=\"" << ypix(q.q3) << "\" width=\""
               << box_w << "\" height=\"" << ypix(q.q1) - ypix(q.q3)
               << "\" fill=\"" << color << "\" fill-opacity=\"0.65\" stroke=\"#333333\"/>\n";
            os << "<line x1=\"" << x << "\" y1=\"" << ypix(q.median) << "\" x2=\""
               << x + box_w << "\" y2=\"" << ypix(q.median)
               << "\" stroke=\"#000000\" stroke-width=\"1.6\"/>\n";
            // Empty dots mark outliers.
            for (double v : q.outliers) {
                os << "<circle cx=\"" << x + box_w / 2 << "\" cy=\"" << ypix(v)
                   << "\" r=\"3\" fill=\"none\" stroke=\"#333333\"/>\n";
            }
        }
    }
    // legend
    for (std::size_t s = 0; s < ns; ++s) {
        double x = ml + 10 + 120.0 * static_cast<double>(s);
        os << "<rect x=\"" << x << "\" y=\"10\" width=\"12\" height=\"12\" fill=\""
           << kPalette[s % kPalette.size()] << "\" fill-opacity=\"0.65\"/>\n";
        os << "<text x=\"" << x + 16 << "\" y=\"20\">" << series[s].label
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string svg_stability_bars(const BootstrapResult& result) {
    // Items grouped by their median-structure community, one horizontal bar
    // per item, colored by community.
    struct Row {
        std::string item;
        int community;
        double stability;
    };
    std::vector<Row> rows;
    for (std::size_t i = 0; i < result.items.size(); ++i) {
        rows.push_back({result.items[i], result.median_structure.assignment[i],
                        result.item_stability.at(result.items[i])});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.community < b.community;
    });

    const int bar_h = 16, ml = 90, mr = 40, mt = 30;
    const int width = 560;
    const int height = mt + bar_h * static_cast<int>(rows.size()) + 40;
    auto xpix = [&](double v) { return ml + (width - ml - mr) * v; };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
    for (int t = 0; t <= 4; ++t) {
        double v = t / 4.0;
        os << "<line x1=\"" << xpix(v) << "\" y1=\"" << mt - 6 << "\" x2=\""
           << xpix(v) << "\" y2=\"" << height - 30 << "\" stroke=\"#eeeeee\"/>\n";
        os << "<text x=\"" << xpix(v) << "\" y=\"" << height - 14
           << "\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        int y = mt + bar_h * static_cast<int>(i);
        os << "<text x=\"" << ml - 5 << "\" y=\"" << y + bar_h - 4
           << "\" text-anchor=\"end\">" << rows[i].item << "</text>\n";
        os << "<rect x=\"" << ml << "\" y=\"" << y + 2 << "\" width=\""
           << xpix(rows[i].stability) - ml << "\" height=\"" << bar_h - 4
           << "\" fill=\"" << kPalette[(rows[i].community - 1) % kPalette.size()]
           << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace netpsych
