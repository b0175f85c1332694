#include "netpsych/likert.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace netpsych {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
        } else if (ch == ',' && !quoted) {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

bool is_missing_token(const std::string& s) {
    return s.empty() || s == "NA" || s == "na" || s == "NaN" || s == "nan" || s == "?";
}

// Parses an integer Likert response. Returns nullopt for missing tokens;
// sets *bad for tokens that are present but not integers.
std::optional<int> parse_cell(const std::string& s, bool* bad) {
    *bad = false;
    if (is_missing_token(s)) return std::nullopt;
    std::size_t pos = 0;
    try {
        double v = std::stod(s, &pos);
        if (pos != s.size()) {
            *bad = true;
            return std::nullopt;
        }
        double r = std::round(v);
        if (std::fabs(v - r) > 1e-9) {
            *bad = true;
            return std::nullopt;
        }
        return static_cast<int>(r);
    } catch (const std::exception&) {
        *bad = true;
        return std::nullopt;
    }
}

double median_sorted(std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

Eigen::Index LikertMatrix::item_index(const std::string& id) const {
    for (std::size_t i = 0; i < item_ids.size(); ++i) {
        if (item_ids[i] == id) return static_cast<Eigen::Index>(i);
    }
    throw DataError("unknown item id: " + id);
}

void LikertMatrix::validate() const {
    if (values.cols() < 2) throw DataError("need at least 2 items");
    if (values.rows() < 3) throw DataError("need at least 3 respondents");
    if (static_cast<Eigen::Index>(item_ids.size()) != values.cols()) {
        throw DataError("item_ids length does not match column count");
    }
    std::set<std::string> seen(item_ids.begin(), item_ids.end());
    if (seen.size() != item_ids.size()) throw DataError("item ids are not unique");
    if (!cohorts.empty() &&
        static_cast<Eigen::Index>(cohorts.size()) != values.rows()) {
        throw DataError("cohort vector length does not match respondent count");
    }
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            int v = values(r, c);
            if (v < scale_min || v > scale_max) {
                throw DataError("cell out of scale range at row " + std::to_string(r) +
                                ", item " + item_ids[c]);
            }
        }
    }
}

void FactorAllocation::add(const std::string& factor, std::vector<std::string> item_list) {
    if (items.count(factor) == 0) factor_names.push_back(factor);
    items[factor] = std::move(item_list);
}

const std::vector<std::string>& FactorAllocation::items_of(const std::string& factor) const {
    auto it = items.find(factor);
    if (it == items.end()) throw DataError("unknown factor: " + factor);
    return it->second;
}

LikertMatrix load_csv(const std::string& path, const LoadOptions& options,
                      LoadReport* report) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: " + path);
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) {
        line.erase(0, 3);  // strip UTF-8 BOM
    }
    std::vector<std::string> header = split_csv_line(line);

    // Resolve item columns.
    std::vector<Eigen::Index> item_cols;
    std::vector<std::string> item_ids;
    Eigen::Index cohort_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!options.cohort_column.empty() && header[i] == options.cohort_column) {
            cohort_col = static_cast<Eigen::Index>(i);
        }
    }
    if (!options.cohort_column.empty() && cohort_col < 0) {
        throw DataError("cohort column not found: " + options.cohort_column);
    }
    if (!options.item_columns.empty()) {
        for (const auto& name : options.item_columns) {
            auto it = std::find(header.begin(), header.end(), name);
            if (it == header.end()) throw DataError("item column not found: " + name);
            item_cols.push_back(static_cast<Eigen::Index>(it - header.begin()));
            item_ids.push_back(name);
        }
    } else {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (static_cast<Eigen::Index>(i) == cohort_col) continue;
            if (!options.item_prefix.empty() &&
                header[i].rfind(options.item_prefix, 0) != 0) {
                continue;
            }
            item_cols.push_back(static_cast<Eigen::Index>(i));
            item_ids.push_back(header[i]);
        }
    }
    if (item_cols.empty()) throw DataError("no item columns detected in " + path);

    const int n_cats = options.scale_max - options.scale_min + 1;
    LoadReport local;
    for (const auto& id : item_ids) {
        local.histograms[id] = std::vector<long>(static_cast<std::size_t>(n_cats), 0);
    }

    std::vector<std::vector<int>> rows;
    std::vector<std::string> cohorts;
    long row_index = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        std::vector<int> row(item_cols.size());
        bool drop = false;
        for (std::size_t j = 0; j < item_cols.size(); ++j) {
            std::size_t col = static_cast<std::size_t>(item_cols[j]);
            std::string cell = col < fields.size() ? fields[col] : "";
            bool bad = false;
            std::optional<int> v = parse_cell(cell, &bad);
            if (bad && options.missing == LoadOptions::MissingPolicy::kStrict) {
                throw DataError("non-integer cell '" + cell + "' in row " +
                                std::to_string(row_index) + ", column " + item_ids[j]);
            }
            if (!v.has_value() || *v < options.scale_min || *v > options.scale_max) {
                if (options.missing == LoadOptions::MissingPolicy::kStrict) {
                    throw DataError("missing or out-of-range cell in row " +
                                    std::to_string(row_index) + ", column " + item_ids[j]);
                }
                drop = true;
            } else {
                row[j] = *v;
            }
        }
        ++local.n_rows_read;
        if (drop) {
            ++local.n_rows_dropped;
            local.dropped_rows.push_back(row_index);
        } else {
            for (std::size_t j = 0; j < row.size(); ++j) {
                local.histograms[item_ids[j]]
                    [static_cast<std::size_t>(row[j] - options.scale_min)]++;
            }
            rows.push_back(std::move(row));
            if (cohort_col >= 0) {
                std::size_t cc = static_cast<std::size_t>(cohort_col);
                cohorts.push_back(cc < fields.size() ? fields[cc] : "");
            }
        }
        ++row_index;
    }
    local.n_rows_kept = static_cast<long>(rows.size());
    if (rows.empty()) throw DataError("all rows dropped while loading " + path);

    LikertMatrix m;
    m.scale_min = options.scale_min;
    m.scale_max = options.scale_max;
    m.item_ids = item_ids;
    m.cohorts = std::move(cohorts);
    m.values.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(item_cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            m.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                rows[r][c];
        }
    }
    m.validate();
    if (report) *report = std::move(local);
    return m;
}

void write_csv(const LikertMatrix& m, const std::string& path,
               const std::string& cohort_column) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    for (std::size_t i = 0; i < m.item_ids.size(); ++i) {
        if (i) out << ',';
        out << m.item_ids[i];
    }
    if (m.has_cohorts()) out << ',' << cohort_column;
    out << '\n';
    for (Eigen::Index r = 0; r < m.n_respondents(); ++r) {
        for (Eigen::Index c = 0; c < m.n_items(); ++c) {
            if (c) out << ',';
            out << m.values(r, c);
        }
        if (m.has_cohorts()) out << ',' << m.cohorts[static_cast<std::size_t>(r)];
        out << '\n';
    }
}

std::vector<ItemDescriptives> describe(const LikertMatrix& m) {
    std::vector<ItemDescriptives> out;
    out.reserve(static_cast<std::size_t>(m.n_items()));
    const long n = m.n_respondents();
    for (Eigen::Index c = 0; c < m.n_items(); ++c) {
        ItemDescriptives d;
        d.item_id = m.item_ids[static_cast<std::size_t>(c)];
        d.n = n;
        std::vector<int> col(static_cast<std::size_t>(n));
        double sum = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
            col[static_cast<std::size_t>(r)] = m.values(r, c);
            sum += m.values(r, c);
        }
        d.mean = sum / n;
        double ss = 0.0;
        for (int v : col) ss += (v - d.mean) * (v - d.mean);
        d.sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
        d.min = *std::min_element(col.begin(), col.end());
        d.max = *std::max_element(col.begin(), col.end());
        d.median = median_sorted(col);
        out.push_back(std::move(d));
    }
    return out;
}

Eigen::MatrixXd factor_scores(const LikertMatrix& m, const FactorAllocation& allocation) {
    Eigen::MatrixXd scores(m.n_respondents(),
                           static_cast<Eigen::Index>(allocation.n_factors()));
    scores.setZero();
    for (std::size_t f = 0; f < allocation.factor_names.size(); ++f) {
        for (const auto& item : allocation.items_of(allocation.factor_names[f])) {
            Eigen::Index c = m.item_index(item);
            scores.col(static_cast<Eigen::Index>(f)) +=
                m.values.col(c).cast<double>();
        }
    }
    return scores;
}

std::vector<CohortSummary> cohort_summaries(const LikertMatrix& m,
                                            const FactorAllocation& allocation) {
    if (!m.has_cohorts()) {
        throw DataError("cohort summaries require a cohort column");
    }
    // Preserve first-appearance order of cohort labels.
    std::vector<std::string> labels;
    for (const auto& c : m.cohorts) {
        if (std::find(labels.begin(), labels.end(), c) == labels.end()) {
            labels.push_back(c);
        }
    }

    std::vector<CohortSummary> out;
    for (const auto& label : labels) {
        std::vector<Eigen::Index> rows;
        for (Eigen::Index r = 0; r < m.n_respondents(); ++r) {
            if (m.cohorts[static_cast<std::size_t>(r)] == label) rows.push_back(r);
        }
        CohortSummary s;
        s.cohort_label = label;
        s.n = static_cast<long>(rows.size());
        s.item_means.assign(static_cast<std::size_t>(m.n_items()), 0.0);
        for (Eigen::Index c = 0; c < m.n_items(); ++c) {
            double sum = 0.0;
            for (Eigen::Index r : rows) sum += m.values(r, c);
            s.item_means[static_cast<std::size_t>(c)] = sum / s.n;
        }
        // Per factor: mean over respondents of the respondent's mean item score.
        for (const auto& f : allocation.factor_names) {
            const auto& its = allocation.items_of(f);
            double acc = 0.0;
            for (Eigen::Index r : rows) {
                double per = 0.0;
                for (const auto& item : its) per += m.values(r, m.item_index(item));
                acc += per / static_cast<double>(its.size());
            }
            s.factor_means[f] = acc / s.n;
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace netpsych
