#include "netpsych/community.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace netpsych {

namespace {

struct MergeStep {
    int a = 0, b = 0;  // community ids merged (creation order)
    int into = 0;      // id of the merged community
};

// Walktrap merge engine. Community ids are assigned in creation order:
// 0..n-1 for singletons, then n, n+1, ... for merges.
class WalktrapTree {
  public:
    WalktrapTree(const Eigen::MatrixXd& weights, int steps) {
        const Eigen::Index n = weights.rows();
        n_ = static_cast<int>(n);
        abs_ = weights.cwiseAbs();
        degree_ = abs_.rowwise().sum();

        std::vector<int> active;
        for (int i = 0; i < n_; ++i) {
            if (degree_(i) > 0.0) active.push_back(i);
        }
        const int na = static_cast<int>(active.size());
        n_active_ = na;
        active_ = active;

        // t-step transition probabilities restricted to non-isolated nodes.
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(na, na);
        for (int i = 0; i < na; ++i) {
            for (int j = 0; j < na; ++j) {
                p(i, j) = abs_(active[i], active[j]) / degree_(active[i]);
            }
        }
        Eigen::MatrixXd pt = Eigen::MatrixXd::Identity(na, na);
        for (int s = 0; s < steps; ++s) pt = pt * p;

        inv_d_ = Eigen::VectorXd(na);
        for (int i = 0; i < na; ++i) inv_d_(i) = 1.0 / degree_(active[i]);

        // Singleton communities over active nodes, keyed by original node id.
        for (int i = 0; i < na; ++i) {
            Community c;
            c.id = active[i];
            c.size = 1;
            c.prob = pt.row(i);
            c.members = {active[i]};
            for (int j = 0; j < na; ++j) {
                if (j != i && abs_(active[i], active[j]) > 0.0) {
                    c.adjacent.insert(active[j]);
                }
            }
            communities_[active[i]] = std::move(c);
        }
        next_id_ = n_;
        // Isolated nodes never participate in merges.
        for (int i = 0; i < n_; ++i) {
            if (degree_(i) == 0.0) isolated_.push_back(i);
        }
    }

    // Runs the full agglomeration, recording each merge.
    void run() {
        while (communities_.size() > 1) {
            double best = std::numeric_limits<double>::infinity();
            int best_a = -1, best_b = -1;
            for (const auto& [ia, ca] : communities_) {
                for (int ib : ca.adjacent) {
                    if (ib <= ia) continue;
                    const Community& cb = communities_.at(ib);
                    double ds = delta_sigma(ca, cb);
                    if (ds < best - 1e-15 ||
                        (std::fabs(ds - best) <= 1e-15 &&
                         (ia < best_a || (ia == best_a && ib < best_b)))) {
                        best = ds;
                        best_a = ia;
                        best_b = ib;
                    }
                }
            }
            if (best_a < 0) break;  // remaining communities are disconnected
            merge(best_a, best_b);
        }
    }

    // Partition after `m` merges (0 = all singletons), as a full-node
    // assignment including isolated singletons.
    CommunityPartition partition_at(int m) const {
        const auto& snap = snapshots_.at(static_cast<std::size_t>(m));
        CommunityPartition part;
        part.assignment.assign(static_cast<std::size_t>(n_), 0);
        int label = 0;
        for (const auto& group : snap) {
            ++label;
            for (int node : group) {
                part.assignment[static_cast<std::size_t>(node)] = label;
            }
        }
        part.n_communities = label;
        part.modularity = modularity(abs_, part.assignment);
        return part;
    }

    int n_merges() const { return static_cast<int>(snapshots_.size()) - 1; }

  private:
    struct Community {
        int id = 0;
        int size = 0;
        Eigen::RowVectorXd prob;
        std::vector<int> members;
        std::set<int> adjacent;
    };

    double delta_sigma(const Community& a, const Community& b) const {
        double r2 = 0.0;
        for (int k = 0; k < n_active_; ++k) {
            double diff = a.prob(k) - b.prob(k);
            r2 += diff * diff * inv_d_(k);
        }
        double sa = a.size, sb = b.size;
        return (sa * sb) / (sa + sb) * r2 / static_cast<double>(n_active_);
    }

    void merge(int ia, int ib) {
        Community a = std::move(communities_.at(ia));
        Community b = std::move(communities_.at(ib));
        communities_.erase(ia);
        communities_.erase(ib);
        Community m;
        m.id = next_id_++;
        m.size = a.size + b.size;
        m.prob = (static_cast<double>(a.size) * a.prob +
                  static_cast<double>(b.size) * b.prob) /
                 static_cast<double>(m.size);
        m.members = std::move(a.members);
        m.members.insert(m.members.end(), b.members.begin(), b.members.end());
        std::sort(m.members.begin(), m.members.end());
        for (int x : a.adjacent) m.adjacent.insert(x);
        for (int x : b.adjacent) m.adjacent.insert(x);
        m.adjacent.erase(ia);
        m.adjacent.erase(ib);
        for (int other : m.adjacent) {
            Community& oc = communities_.at(other);
            oc.adjacent.erase(ia);
            oc.adjacent.erase(ib);
            oc.adjacent.insert(m.id);
        }
        communities_[m.id] = std::move(m);
        record_snapshot();
    }

    void record_snapshot() {
        std::vector<std::vector<int>> snap;
        for (const auto& [id, c] : communities_) snap.push_back(c.members);
        for (int iso : isolated_) snap.push_back({iso});
        snapshots_.push_back(std::move(snap));
    }

  public:
    void init_snapshots() {
        snapshots_.clear();
        record_snapshot();
    }

  private:
    int n_ = 0;
    int n_active_ = 0;
    int next_id_ = 0;
    Eigen::MatrixXd abs_;
    Eigen::VectorXd degree_;
    Eigen::VectorXd inv_d_;
    std::vector<int> active_;
    std::vector<int> isolated_;
    std::map<int, Community> communities_;
    std::vector<std::vector<std::vector<int>>> snapshots_;
};

CommunityPartition walktrap_impl(const Eigen::MatrixXd& weights, int steps,
                                 int target_k) {
    const Eigen::Index n = weights.rows();
    if (n < 1) throw NumericError("walktrap: empty network");
    if (weights.cols() != n) throw NumericError("walktrap: weights must be square");
    WalktrapTree tree(weights, steps);
    tree.init_snapshots();
    tree.run();

    if (target_k > 0) {
        // Cut with exactly target_k communities when the tree contains it.
        int best_m = -1;
        int best_gap = std::numeric_limits<int>::max();
        for (int m = 0; m <= tree.n_merges(); ++m) {
            CommunityPartition p = tree.partition_at(m);
            int gap = std::abs(p.n_communities - target_k);
            if (gap < best_gap) {
                best_gap = gap;
                best_m = m;
            }
            if (gap == 0) break;
        }
        return tree.partition_at(best_m);
    }

    double best_q = -std::numeric_limits<double>::infinity();
    int best_m = 0;
    for (int m = 0; m <= tree.n_merges(); ++m) {
        CommunityPartition p = tree.partition_at(m);
        if (p.modularity > best_q + 1e-15) {
            best_q = p.modularity;
            best_m = m;
        }
    }
    return tree.partition_at(best_m);
}

}  // namespace

void CommunityPartition::renumber() {
    std::map<int, int> relabel;
    int next = 0;
    for (int& a : assignment) {
        auto [it, inserted] = relabel.emplace(a, next + 1);
        if (inserted) ++next;
        a = it->second;
    }
    n_communities = next;
}

double modularity(const Eigen::MatrixXd& weights, const std::vector<int>& assignment) {
    const Eigen::Index n = weights.rows();
    if (static_cast<Eigen::Index>(assignment.size()) != n) {
        throw NumericError("modularity: assignment does not cover all nodes");
    }
    for (int a : assignment) {
        if (a < 1) throw NumericError("modularity: assignment labels must be >= 1");
    }
    Eigen::MatrixXd a = weights.cwiseAbs();
    Eigen::VectorXd k = a.rowwise().sum();
    double m2 = k.sum();
    if (m2 == 0.0) return 0.0;
    double q = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            if (assignment[static_cast<std::size_t>(i)] ==
                assignment[static_cast<std::size_t>(j)]) {
                q += a(i, j) - k(i) * k(j) / m2;
            }
        }
    }
    // Diagonal null-model terms keep Q(single community) exactly zero.
    for (Eigen::Index i = 0; i < n; ++i) q -= k(i) * k(i) / m2;
    return q / m2;
}

CommunityPartition walktrap(const Eigen::MatrixXd& weights, int steps) {
    return walktrap_impl(weights, steps, 0);
}

CommunityPartition walktrap_cut(const Eigen::MatrixXd& weights, int steps,
                                int target_k) {
    return walktrap_impl(weights, steps, target_k);
}

CommunityPartition louvain(const Eigen::MatrixXd& weights, double resolution) {
    const Eigen::Index n0 = weights.rows();
    if (n0 < 1) throw NumericError("louvain: empty network");
    Eigen::MatrixXd a = weights.cwiseAbs();
    a.diagonal().setZero();
    // Aggregated self-loop weight per node (within-community mass folded in
    // when levels collapse).
    Eigen::VectorXd self_w = Eigen::VectorXd::Zero(n0);

    // node -> original members across aggregation levels.
    std::vector<std::vector<int>> members(static_cast<std::size_t>(n0));
    for (Eigen::Index i = 0; i < n0; ++i) {
        members[static_cast<std::size_t>(i)] = {static_cast<int>(i)};
    }

    while (true) {
        const Eigen::Index n = a.rows();
        Eigen::VectorXd k = a.rowwise().sum() + 2.0 * self_w;
        double m2 = k.sum();
        std::vector<int> comm(static_cast<std::size_t>(n));
        std::iota(comm.begin(), comm.end(), 0);
        if (m2 == 0.0) break;

        std::vector<double> sigma_tot(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            sigma_tot[static_cast<std::size_t>(i)] = k(i);
        }

        bool any_move = false;
        bool improved = true;
        while (improved) {
            improved = false;
            for (Eigen::Index i = 0; i < n; ++i) {
                int ci = comm[static_cast<std::size_t>(i)];
                // Weight from i to each neighboring community.
                std::map<int, double> to_comm;
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (j == i || a(i, j) == 0.0) continue;
                    to_comm[comm[static_cast<std::size_t>(j)]] += a(i, j);
                }
                sigma_tot[static_cast<std::size_t>(ci)] -= k(i);
                double base = to_comm.count(ci) ? to_comm[ci] : 0.0;
                double best_gain =
                    base - resolution * sigma_tot[static_cast<std::size_t>(ci)] *
                               k(i) / m2;
                int best_c = ci;
                for (const auto& [c, w] : to_comm) {
                    if (c == ci) continue;
                    double gain = w - resolution *
                                          sigma_tot[static_cast<std::size_t>(c)] *
                                          k(i) / m2;
                    if (gain > best_gain + 1e-12 ||
                        (std::fabs(gain - best_gain) <= 1e-12 && c < best_c)) {
                        best_gain = gain;
                        best_c = c;
                    }
                }
                sigma_tot[static_cast<std::size_t>(best_c)] += k(i);
                if (best_c != ci) {
                    comm[static_cast<std::size_t>(i)] = best_c;
                    improved = true;
                    any_move = true;
                }
            }
        }
        if (!any_move) break;

        // Aggregate communities into a smaller graph.
        std::map<int, int> relabel;
        int nc = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            int c = comm[static_cast<std::size_t>(i)];
            if (relabel.emplace(c, nc).second) ++nc;
        }
        if (nc == static_cast<int>(n)) break;
        Eigen::MatrixXd agg = Eigen::MatrixXd::Zero(nc, nc);
        Eigen::VectorXd agg_self = Eigen::VectorXd::Zero(nc);
        std::vector<std::vector<int>> agg_members(static_cast<std::size_t>(nc));
        for (Eigen::Index i = 0; i < n; ++i) {
            int ci = relabel[comm[static_cast<std::size_t>(i)]];
            auto& dst = agg_members[static_cast<std::size_t>(ci)];
            dst.insert(dst.end(), members[static_cast<std::size_t>(i)].begin(),
                       members[static_cast<std::size_t>(i)].end());
            agg_self(ci) += self_w(i);
            for (Eigen::Index j = 0; j < n; ++j) {
                int cj = relabel[comm[static_cast<std::size_t>(j)]];
                if (ci == cj) {
                    if (i < j) agg_self(ci) += a(i, j);
                } else {
                    agg(ci, cj) += a(i, j);
                }
            }
        }
        a = std::move(agg);
        self_w = std::move(agg_self);
        members = std::move(agg_members);
        if (a.rows() <= 1) break;
    }

    CommunityPartition part;
    part.assignment.assign(static_cast<std::size_t>(n0), 0);
    int label = 0;
    for (const auto& group : members) {
        ++label;
        for (int node : group) {
            part.assignment[static_cast<std::size_t>(node)] = label;
        }
    }
    part.n_communities = label;
    part.renumber();
    part.modularity = modularity(weights, part.assignment);
    return part;
}

}  // namespace netpsych
