#include "specind/walks.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "specind/errors.hpp"
#include "specind/spectral.hpp"

namespace specind {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int add_node(WalkTree& t, int parent, int endpoint, bool closing, const Budgets& budgets) {
    if (static_cast<std::size_t>(t.size()) >= budgets.tree_nodes)
        throw BudgetExceeded("walk tree exceeds " + std::to_string(budgets.tree_nodes) + " nodes");
    int id = t.size();
    t.endpoint.push_back(endpoint);
    t.parent.push_back(parent);
    t.depth.push_back(parent < 0 ? 0 : t.depth[parent] + 1);
    t.children.emplace_back();
    t.cycle_closing.push_back(closing ? 1 : 0);
    if (parent >= 0)
        t.children[parent].push_back(id);
    return id;
}

} // namespace

WalkTree build_walk_tree(const Graph& g, WalkKind kind, int root, int k, const Budgets& budgets) {
    if (root < 0 || root >= g.num_vertices())
        throw InvalidParams("walk-tree root out of range");
    if (kind != WalkKind::saw && k < 0)
        throw InvalidParams("walk-tree depth cap must be >= 0");
    WalkTree t;
    t.root = root;
    t.kind = kind;
    t.depth_cap = k;
    add_node(t, -1, root, false, budgets);

    if (kind == WalkKind::saw) {
        std::vector<int> pos(g.num_vertices(), -1); // position of each vertex on the current walk
        std::function<void(int)> expand = [&](int node) {
            int v = t.endpoint[node];
            pos[v] = t.depth[node];
            for (int w : g.neighbors(v)) {
                if (pos[w] < 0) {
                    expand(add_node(t, node, w, false, budgets));
                } else if (pos[w] <= t.depth[node] - 2) {
                    add_node(t, node, w, true, budgets); // closes a cycle, leaf
                }
            }
            pos[v] = -1;
        };
        expand(0);
        return t;
    }

    std::function<void(int)> expand = [&](int node) {
        if (t.depth[node] >= k)
            return;
        int v = t.endpoint[node];
        int from = t.parent[node] >= 0 ? t.endpoint[t.parent[node]] : -1;
        for (int w : g.neighbors(v)) {
            if (kind == WalkKind::nb && w == from)
                continue;
            expand(add_node(t, node, w, false, budgets));
        }
    };
    expand(0);
    return t;
}

std::vector<int> copies(const WalkTree& t, int u) {
    std::vector<int> out;
    for (int i = 0; i < t.size(); ++i)
        if (t.endpoint[i] == u)
            out.push_back(i);
    return out;
}

SawWeights saw_boundary_and_weights(const Graph& g, const GibbsParams& p, const Pinning& pin,
                                    int root, const Budgets& budgets) {
    if (pin.size() != g.num_vertices())
        throw DimensionMismatch("pinning size does not match graph");
    SawWeights out;
    out.tree = build_walk_tree(g, WalkKind::saw, root, 0, budgets);
    const WalkTree& t = out.tree;
    const int m = t.size();

    out.sigma.assign(m, 0);
    for (int i = 0; i < m; ++i) {
        int v = t.endpoint[i];
        if (pin.pinned(v)) {
            out.sigma[i] = static_cast<signed char>(pin.spin(v));
        } else if (t.cycle_closing[i]) {
            // The closing leaf revisits v = w_j. Its spin compares the edge
            // the cycle returns through with the edge it originally left
            // through, via the canonical vertex order: +1 when the return
            // neighbor w_{l-1} exceeds the departure neighbor w_{j+1}.
            int returned_from = t.endpoint[t.parent[i]];
            int departed_to = -1;
            for (int a = t.parent[i]; a > 0; a = t.parent[a]) {
                if (t.endpoint[t.parent[a]] == v) {
                    departed_to = t.endpoint[a];
                    break;
                }
            }
            out.sigma[i] = static_cast<signed char>(returned_from > departed_to ? +1 : -1);
        }
    }

    // Subtree log-ratios, bottom up (nodes are in DFS preorder, so reverse
    // order visits children first). A pinned node acts as an absorbing
    // leaf: its subtree never enters the recursion.
    out.log_ratio.assign(m, 0.0);
    const double log_lambda = std::log(p.lambda);
    for (int i = m - 1; i >= 0; --i) {
        if (out.sigma[i] != 0) {
            out.log_ratio[i] = out.sigma[i] > 0 ? kInf : -kInf;
            continue;
        }
        double x = log_lambda;
        for (int c : t.children[i])
            x += log_ratio_factor(p, out.log_ratio[c]);
        out.log_ratio[i] = x;
    }

    out.weight.assign(m, 0.0);
    for (int i = 1; i < m; ++i) {
        if (out.sigma[i] != 0 || out.sigma[t.parent[i]] != 0)
            out.weight[i] = 0.0;
        else
            out.weight[i] = h_of(p, out.log_ratio[i]);
    }
    return out;
}

Eigen::MatrixXd walk_matrix(const std::vector<WalkTree>& trees,
                            const std::vector<std::vector<double>>& edge_weights,
                            const std::vector<int>& roots) {
    const int nv = static_cast<int>(roots.size());
    if (trees.size() != roots.size() || edge_weights.size() != roots.size())
        throw DimensionMismatch("walk_matrix needs one tree and weight set per root");
    int max_vertex = -1;
    for (int r : roots)
        max_vertex = std::max(max_vertex, r);
    for (const auto& t : trees)
        for (int e : t.endpoint)
            max_vertex = std::max(max_vertex, e);
    std::vector<int> col(max_vertex + 1, -1);
    for (int i = 0; i < nv; ++i)
        col[roots[i]] = i;

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(nv, nv);
    for (int i = 0; i < nv; ++i) {
        const WalkTree& t = trees[i];
        const std::vector<double>& wt = edge_weights[i];
        if (t.root != roots[i])
            throw DimensionMismatch("tree root does not match its row vertex");
        if (static_cast<int>(wt.size()) != t.size())
            throw DimensionMismatch("edge weight vector does not match tree size");
        std::function<void(int, double)> walk = [&](int node, double prod) {
            if (node != 0)
                prod *= wt[node];
            if (prod == 0.0 && node != 0)
                return; // nothing below can contribute
            int c = col[t.endpoint[node]];
            if (c < 0)
                throw DimensionMismatch("walk endpoint outside the matrix index set");
            w(i, c) += prod;
            for (int ch : t.children[node])
                walk(ch, prod);
        };
        walk(0, 1.0);
    }
    return w;
}

Eigen::VectorXd walk_vector(const std::vector<WalkTree>& trees, const Eigen::VectorXd& conj,
                            double s, double delta, double c) {
    if (s < 1.0)
        throw InvalidParams("walk_vector needs s >= 1");
    if (delta <= 0.0 || c <= 0.0)
        throw InvalidParams("walk_vector needs delta, c > 0");
    if ((conj.array() <= 0.0).any())
        throw InvalidParams("conjugator must be strictly positive");
    const bool s_inf = std::isinf(s);

    Eigen::VectorXd q(trees.size());
    for (std::size_t i = 0; i < trees.size(); ++i) {
        const WalkTree& t = trees[i];
        double total = 0.0;
        for (int child : t.children[0]) {
            // accumulate per-depth sums (or maxima for s = infinity) over the
            // subtree rooted at this child of the root
            std::vector<double> acc;
            std::function<void(int, int)> visit = [&](int node, int d) {
                if (static_cast<int>(acc.size()) <= d)
                    acc.resize(d + 1, s_inf ? 0.0 : 0.0);
                double dv = conj(t.endpoint[node]);
                if (s_inf)
                    acc[d] = std::max(acc[d], dv);
                else
                    acc[d] += std::pow(dv, s);
                for (int ch : t.children[node])
                    visit(ch, d + 1);
            };
            visit(child, 0);
            for (std::size_t l = 0; l < acc.size(); ++l) {
                if (acc[l] <= 0.0)
                    continue;
                if (s_inf)
                    total += acc[l];
                else
                    total += std::pow(std::pow(delta, static_cast<double>(l)) * acc[l], 1.0 / s);
            }
        }
        q(static_cast<Eigen::Index>(i)) = 1.0 + c / conj(t.root) * total;
    }
    return q;
}

Eigen::VectorXd walk_vector(const Graph& g, WalkKind kind, int k, const Eigen::VectorXd& conj,
                            double s, double delta, double c, const Budgets& budgets) {
    std::vector<WalkTree> trees;
    trees.reserve(g.num_vertices());
    for (int r = 0; r < g.num_vertices(); ++r)
        trees.push_back(build_walk_tree(g, kind, r, k, budgets));
    return walk_vector(trees, conj, s, delta, c);
}

double dtp_norm(const Eigen::MatrixXd& m, const Eigen::VectorXd& d, double t, double p) {
    if (m.rows() != m.cols() || d.size() != m.rows())
        throw DimensionMismatch("dtp_norm needs a square matrix and a matching diagonal");
    if ((d.array() <= 0.0).any())
        throw InvalidParams("dtp_norm needs a positive diagonal");
    Eigen::MatrixXd c(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            c(i, j) = m(i, j) * std::pow(d(j) / d(i), t);
    if (p == 1.0)
        return c.cwiseAbs().colwise().sum().maxCoeff();
    if (p == 2.0)
        return operator_two_norm(c);
    if (std::isinf(p))
        return c.cwiseAbs().rowwise().sum().maxCoeff();
    throw InvalidParams("dtp_norm supports p in {1, 2, inf}");
}

PotentialVectorCheck check_potential_vector(const WalkTree& tree, const std::vector<double>& xi,
                                            const std::vector<double>& gamma, double s,
                                            double delta, double c) {
    if (static_cast<int>(xi.size()) != tree.size() || static_cast<int>(gamma.size()) != tree.size())
        throw DimensionMismatch("weight vectors must match the tree");
    if (s < 1.0)
        throw InvalidParams("potential vector needs s >= 1");
    const bool s_inf = std::isinf(s);
    const double r = s_inf ? 1.0 : (s == 1.0 ? kInf : s / (s - 1.0)); // Hoelder conjugate
    const double rhs = s_inf ? 1.0 : std::pow(delta, 1.0 / s);

    PotentialVectorCheck out;
    for (int v = 1; v < tree.size(); ++v) {
        if (tree.children[v].empty())
            continue;
        double norm_r;
        if (std::isinf(r)) {
            norm_r = 0.0;
            for (int ch : tree.children[v])
                norm_r = std::max(norm_r, std::abs(xi[ch]) / gamma[ch]);
        } else {
            double acc = 0.0;
            for (int ch : tree.children[v])
                acc += std::pow(std::abs(xi[ch]) / gamma[ch], r);
            norm_r = std::pow(acc, 1.0 / r);
        }
        double lhs = gamma[v] * norm_r;
        out.worst_contraction = std::max(out.worst_contraction, lhs / rhs);
        if (lhs > rhs * (1.0 + 1e-12))
            out.contraction_ok = false;
    }

    double max_gamma = 0.0, max_ratio = 0.0;
    for (int v = 1; v < tree.size(); ++v) {
        max_gamma = std::max(max_gamma, gamma[v]);
        max_ratio = std::max(max_ratio, std::abs(xi[v]) / gamma[v]);
    }
    out.worst_boundedness = max_gamma * max_ratio;
    if (out.worst_boundedness > c * (1.0 + 1e-12))
        out.boundedness_ok = false;
    return out;
}

std::string dump_walk_tree(const WalkTree& t, const std::vector<signed char>* sigma,
                           const std::vector<double>* weight) {
    std::ostringstream os;
    std::function<void(int)> rec = [&](int node) {
        for (int i = 0; i < t.depth[node]; ++i)
            os << "  ";
        os << t.depth[node] << " " << t.endpoint[node];
        if (sigma && (*sigma)[node] != 0)
            os << " [pinned " << ((*sigma)[node] > 0 ? "+1" : "-1") << "]";
        if (weight && node != 0)
            os << " " << (*weight)[node];
        os << "\n";
        for (int ch : t.children[node])
            rec(ch);
    };
    rec(0);
    return os.str();
}

} // namespace specind
