#include "netpsych/association.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "netpsych/bivariate_normal.hpp"
#include "netpsych/distributions.hpp"

namespace netpsych {

namespace {

// Sum of t*(t-1)/2, t*(t-1)*(2t+5), t*(t-1), t*(t-1)*(t-2) over tie runs.
struct TieStats {
    double pairs = 0.0;
    double v_t = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
};

TieStats tie_stats(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    TieStats s;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        double t = static_cast<double>(j - i);
        s.pairs += t * (t - 1.0) / 2.0;
        s.v_t += t * (t - 1.0) * (2.0 * t + 5.0);
        s.t1 += t * (t - 1.0);
        s.t2 += t * (t - 1.0) * (t - 2.0);
        i = j;
    }
    return s;
}

// Counts strict inversions in v by merge sort (pairs i < j with v[i] > v[j]).
double count_inversions(std::vector<double>& v, std::vector<double>& buf,
                        std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0.0;
    std::size_t mid = lo + (hi - lo) / 2;
    double inv = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
    std::size_t a = lo, b = mid, k = lo;
    while (a < mid && b < hi) {
        if (v[b] < v[a]) {
            buf[k++] = v[b++];
            inv += static_cast<double>(mid - a);
        } else {
            buf[k++] = v[a++];
        }
    }
    while (a < mid) buf[k++] = v[a++];
    while (b < hi) buf[k++] = v[b++];
    std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
    return inv;
}

std::vector<double> average_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return v[a] < v[b];
    });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && v[idx[j]] == v[idx[i]]) ++j;
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[idx[k]] = avg;
        i = j;
    }
    return ranks;
}

// Contingency table over the observed categories of x and y.
struct Table {
    std::vector<int> x_levels, y_levels;
    Eigen::MatrixXd counts;
    long n = 0;
};

Table contingency(const std::vector<int>& x, const std::vector<int>& y) {
    Table t;
    std::map<int, int> xl, yl;
    for (int v : x) xl.emplace(v, 0);
    for (int v : y) yl.emplace(v, 0);
    int k = 0;
    for (auto& [v, i] : xl) { i = k++; t.x_levels.push_back(v); }
    k = 0;
    for (auto& [v, i] : yl) { i = k++; t.y_levels.push_back(v); }
    t.counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(xl.size()),
                                     static_cast<Eigen::Index>(yl.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        t.counts(xl[x[i]], yl[y[i]]) += 1.0;
    }
    t.n = static_cast<long>(x.size());
    return t;
}

// Thresholds from cumulative marginal proportions, padded with +-inf.
std::vector<double> thresholds_from_margin(const Eigen::VectorXd& margin, long n) {
    std::vector<double> cuts;
    cuts.push_back(-std::numeric_limits<double>::infinity());
    double cum = 0.0;
    for (Eigen::Index i = 0; i + 1 < margin.size(); ++i) {
        cum += margin(i);
        cuts.push_back(norm_quantile(cum / static_cast<double>(n)));
    }
    cuts.push_back(std::numeric_limits<double>::infinity());
    return cuts;
}

double table_loglik(const Table& t, const std::vector<double>& a,
                    const std::vector<double>& b, double rho) {
    const std::size_t nr = static_cast<std::size_t>(t.counts.rows());
    const std::size_t nc = static_cast<std::size_t>(t.counts.cols());
    // CDF lattice; infinite bounds collapse to univariate / 0-1 values.
    std::vector<std::vector<double>> grid(nr + 1, std::vector<double>(nc + 1));
    for (std::size_t i = 0; i <= nr; ++i) {
        for (std::size_t j = 0; j <= nc; ++j) {
            double h = a[i], k = b[j];
            if (std::isinf(h) && h < 0) { grid[i][j] = 0.0; continue; }
            if (std::isinf(k) && k < 0) { grid[i][j] = 0.0; continue; }
            bool hi = std::isinf(h), ki = std::isinf(k);
            if (hi && ki) grid[i][j] = 1.0;
            else if (hi) grid[i][j] = norm_cdf(k);
            else if (ki) grid[i][j] = norm_cdf(h);
            else grid[i][j] = bvn_cdf(h, k, rho);
        }
    }
    double ll = 0.0;
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t c = 0; c < nc; ++c) {
            double cnt = t.counts(static_cast<Eigen::Index>(r),
                                  static_cast<Eigen::Index>(c));
            if (cnt == 0.0) continue;
            // Cell probability by inclusion-exclusion on the CDF lattice.
            double pi = grid[r + 1][c + 1] - grid[r][c + 1] - grid[r + 1][c] + grid[r][c];
            ll += cnt * std::log(std::max(pi, 1e-300));
        }
    }
    return ll;
}

// Bounded scalar minimization (Brent). Returns argmin of f on [lo, hi].
template <typename F>
double brent_min(F f, double lo, double hi, double tol, int max_iter, bool* converged) {
    const double gold = 0.3819660112501051;
    double a = lo, b = hi;
    double x = a + gold * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    if (converged) *converged = false;
    for (int iter = 0; iter < max_iter; ++iter) {
        double xm = 0.5 * (a + b);
        double tol1 = tol * std::fabs(x) + 1e-12;
        double tol2 = 2.0 * tol1;
        if (std::fabs(x - xm) <= tol2 - 0.5 * (b - a)) {
            if (converged) *converged = true;
            return x;
        }
        bool parabolic = false;
        if (std::fabs(e) > tol1) {
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::fabs(q);
            double etemp = e;
            e = d;
            if (std::fabs(p) < std::fabs(0.5 * q * etemp) && p > q * (a - x) &&
                p < q * (b - x)) {
                parabolic = true;
                d = p / q;
                double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (xm >= x) ? tol1 : -tol1;
            }
        }
        if (!parabolic) {
            e = (x >= xm) ? a - x : b - x;
            d = gold * e;
        }
        double u = (std::fabs(d) >= tol1) ? x + d : x + (d >= 0 ? tol1 : -tol1);
        double fu = f(u);
        if (fu <= fx) {
            if (u >= x) a = x; else b = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return x;
}

int observed_categories(const Eigen::MatrixXi& values, Eigen::Index col) {
    std::map<int, int> seen;
    for (Eigen::Index r = 0; r < values.rows(); ++r) seen.emplace(values(r, col), 0);
    return static_cast<int>(seen.size());
}

}  // namespace

std::string to_string(CorrMethod m) {
    switch (m) {
        case CorrMethod::kKendallTauB: return "kendall";
        case CorrMethod::kSpearman: return "spearman";
        case CorrMethod::kPearson: return "pearson";
        case CorrMethod::kPolychoric: return "polychoric";
        case CorrMethod::kAuto: return "auto";
    }
    return "auto";
}

CorrMethod corr_method_from_string(const std::string& s) {
    if (s == "kendall" || s == "kendall_tau_b") return CorrMethod::kKendallTauB;
    if (s == "spearman") return CorrMethod::kSpearman;
    if (s == "pearson") return CorrMethod::kPearson;
    if (s == "polychoric") return CorrMethod::kPolychoric;
    if (s == "auto") return CorrMethod::kAuto;
    throw ConfigError("unknown correlation method: " + s);
}

CorrResult kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw NumericError("kendall_tau_b: length mismatch");
    if (n < 2) throw NumericError("kendall_tau_b: need at least 2 observations");

    TieStats tx = tie_stats(x);
    TieStats ty = tie_stats(y);
    const double n0 = static_cast<double>(n) * (n - 1.0) / 2.0;
    if (tx.pairs == n0 && ty.pairs == n0) {
        throw NumericError("kendall_tau_b: both vectors constant, tau undefined");
    }

    // Knight's algorithm: sort by (x, y), count y inversions, combine with
    // tie counts to get C - D.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];

    // Joint ties.
    double n3 = 0.0;
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j < n && x[idx[j]] == x[idx[i]] && y[idx[j]] == y[idx[i]]) ++j;
            double t = static_cast<double>(j - i);
            n3 += t * (t - 1.0) / 2.0;
            i = j;
        }
    }
    std::vector<double> buf(n);
    double swaps = count_inversions(ys, buf, 0, n);
    double s = n0 - tx.pairs - ty.pairs + n3 - 2.0 * swaps;

    double denom = std::sqrt((n0 - tx.pairs) * (n0 - ty.pairs));
    if (denom == 0.0) {
        throw NumericError("kendall_tau_b: a vector is constant, tau undefined");
    }
    CorrResult r;
    r.coefficient = s / denom;

    // Normal approximation with tie-corrected variance of S.
    double dn = static_cast<double>(n);
    double v0 = dn * (dn - 1.0) * (2.0 * dn + 5.0);
    double var_s = (v0 - tx.v_t - ty.v_t) / 18.0;
    var_s += tx.t1 * ty.t1 / (2.0 * dn * (dn - 1.0));
    if (n > 2) {
        var_s += tx.t2 * ty.t2 / (9.0 * dn * (dn - 1.0) * (dn - 2.0));
    }
    if (var_s <= 0.0) {
        r.p = 1.0;
    } else {
        double z = s / std::sqrt(var_s);
        r.p = std::min(1.0, 2.0 * norm_sf(std::fabs(z)));
    }
    return r;
}

CorrResult pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw NumericError("pearson: length mismatch");
    if (n < 3) throw NumericError("pearson: need at least 3 observations");
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw NumericError("pearson: constant vector, correlation undefined");
    }
    CorrResult r;
    r.coefficient = sxy / std::sqrt(sxx * syy);
    double rr = std::clamp(r.coefficient, -0.9999999999, 0.9999999999);
    double t = rr * std::sqrt((n - 2.0) / (1.0 - rr * rr));
    r.p = t_two_sided(std::fabs(t), static_cast<double>(n - 2));
    return r;
}

CorrResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson(average_ranks(x), average_ranks(y));
}

double polychoric_loglik(const std::vector<int>& x, const std::vector<int>& y,
                         double rho) {
    Table t = contingency(x, y);
    Eigen::VectorXd rm = t.counts.rowwise().sum();
    Eigen::VectorXd cm = t.counts.colwise().sum();
    auto a = thresholds_from_margin(rm, t.n);
    auto b = thresholds_from_margin(cm, t.n);
    return table_loglik(t, a, b, rho);
}

double polychoric(const std::vector<int>& x, const std::vector<int>& y,
                  const PolychoricOptions& options) {
    if (x.size() != y.size()) throw NumericError("polychoric: length mismatch");
    Table t = contingency(x, y);
    if (t.x_levels.size() < 2 || t.y_levels.size() < 2) {
        throw NumericError("polychoric: need at least 2 observed categories per vector");
    }
    Eigen::VectorXd rm = t.counts.rowwise().sum();
    Eigen::VectorXd cm = t.counts.colwise().sum();
    auto a = thresholds_from_margin(rm, t.n);
    auto b = thresholds_from_margin(cm, t.n);

    bool converged = false;
    double rho = brent_min(
        [&](double r) { return -table_loglik(t, a, b, r); },
        -options.rho_bound, options.rho_bound, options.tol, options.max_iter,
        &converged);
    if (!converged) {
        throw NumericError("polychoric: optimizer did not converge");
    }
    return rho;
}

AssociationMatrix association_matrix(const LikertMatrix& m, CorrMethod method) {
    const Eigen::Index p = m.n_items();
    AssociationMatrix out;
    out.method = method;
    out.n_used = m.n_respondents();
    out.item_ids = m.item_ids;
    out.coefficients = Eigen::MatrixXd::Identity(p, p);
    out.p_values = Eigen::MatrixXd::Zero(p, p);

    std::vector<int> cats(static_cast<std::size_t>(p));
    for (Eigen::Index c = 0; c < p; ++c) cats[c] = observed_categories(m.values, c);

    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i + 1; j < p; ++j) {
            CorrMethod pair_method = method;
            if (method == CorrMethod::kAuto) {
                pair_method = (cats[i] <= 7 && cats[j] <= 7) ? CorrMethod::kPolychoric
                                                             : CorrMethod::kPearson;
            }
            try {
                CorrResult r;
                if (pair_method == CorrMethod::kPolychoric) {
                    std::vector<int> xi(m.n_respondents()), yj(m.n_respondents());
                    for (Eigen::Index k = 0; k < m.n_respondents(); ++k) {
                        xi[k] = m.values(k, i);
                        yj[k] = m.values(k, j);
                    }
                    r.coefficient = polychoric(xi, yj);
                    double lr = 2.0 * (polychoric_loglik(xi, yj, r.coefficient) -
                                       polychoric_loglik(xi, yj, 0.0));
                    r.p = chi2_sf(std::max(lr, 0.0), 1.0);
                } else {
                    std::vector<double> xd(m.n_respondents()), yd(m.n_respondents());
                    for (Eigen::Index k = 0; k < m.n_respondents(); ++k) {
                        xd[k] = m.values(k, i);
                        yd[k] = m.values(k, j);
                    }
                    switch (pair_method) {
                        case CorrMethod::kKendallTauB: r = kendall_tau_b(xd, yd); break;
                        case CorrMethod::kSpearman: r = spearman(xd, yd); break;
                        case CorrMethod::kPearson: r = pearson(xd, yd); break;
                        default: r = pearson(xd, yd); break;
                    }
                }
                out.coefficients(i, j) = out.coefficients(j, i) = r.coefficient;
                out.p_values(i, j) = out.p_values(j, i) = r.p;
            } catch (const std::exception& e) {
                throw NumericError("association failed for pair (" + m.item_ids[i] +
                                   ", " + m.item_ids[j] + "): " + e.what());
            }
        }
    }
    return out;
}

Eigen::MatrixXd nearest_positive_definite(const Eigen::MatrixXd& m, double floor) {
    Eigen::MatrixXd s = 0.5 * (m + m.transpose());
    for (int pass = 0; pass < 100; ++pass) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
        if (eig.eigenvalues().minCoeff() >= floor * (1.0 - 1e-9)) return s;
        Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(floor);
        s = eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
        s = 0.5 * (s + s.transpose());
        Eigen::VectorXd d = s.diagonal().cwiseSqrt();
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
            for (Eigen::Index j = 0; j < s.cols(); ++j) {
                s(i, j) /= d(i) * d(j);
            }
        }
    }
    return s;
}

}  // namespace netpsych
