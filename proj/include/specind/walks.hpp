#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specind/budgets.hpp"
#include "specind/gibbs.hpp"
#include "specind/graph.hpp"

namespace specind {

enum class WalkKind { saw, nb, max };

/// Rooted tree of walks emanating from a root vertex. Nodes are stored in
/// DFS preorder; each node keeps only its terminal vertex and parent link,
/// so the walk itself is recovered by ancestor traversal. Children are
/// ordered by ascending endpoint id.
struct WalkTree {
    int root = 0;
    WalkKind kind = WalkKind::saw;
    int depth_cap = 0; // ignored for saw
    std::vector<int> endpoint;
    std::vector<int> parent; // -1 at the root
    std::vector<int> depth;
    std::vector<std::vector<int>> children;
    std::vector<char> cycle_closing; // SAW case-2 leaves

    int size() const { return static_cast<int>(endpoint.size()); }
};

WalkTree build_walk_tree(const Graph& g, WalkKind kind, int root, int k,
                         const Budgets& budgets = {});

/// Nodes whose walk ends at u, in DFS order.
std::vector<int> copies(const WalkTree& t, int u);

/// SAW boundary construction and influence weights for T_SAW(root):
/// Lambda-copies are pinned to tau, cycle-closing leaves to -1 when the
/// closing endpoint exceeds its predecessor (+1 otherwise); edge weights are
/// 0 at pinned nodes and h(log R) elsewhere, with R the subtree ratio under
/// the pinned boundary.
struct SawWeights {
    WalkTree tree;
    std::vector<signed char> sigma;   // per node: 0 free, +1/-1 pinned
    std::vector<double> log_ratio;    // per node: log R under (Gamma, sigma)
    std::vector<double> weight;       // per node: weight of the edge to the parent
};

SawWeights saw_boundary_and_weights(const Graph& g, const GibbsParams& p, const Pinning& pin,
                                    int root, const Budgets& budgets = {});

/// Walk-matrix over the given roots: entry (i, j) sums the products of edge
/// weights over paths from root i to copies of roots[j] in tree i. The
/// length-0 path contributes 1 to the diagonal. All nonzero-weight walk
/// endpoints must lie in `roots`.
Eigen::MatrixXd walk_matrix(const std::vector<WalkTree>& trees,
                            const std::vector<std::vector<double>>& edge_weights,
                            const std::vector<int>& roots);

/// Walk-vector component per tree root: 1 + c/conj(r) * sum over root
/// subtrees i and depths l of (delta^l * sum_w #copies * conj(w)^s)^(1/s).
/// s may be infinity, in which case each term degenerates to the max of
/// conj over the endpoints present at that depth.
Eigen::VectorXd walk_vector(const std::vector<WalkTree>& trees, const Eigen::VectorXd& conj,
                            double s, double delta, double c);

/// Convenience: builds the trees for every vertex of g.
Eigen::VectorXd walk_vector(const Graph& g, WalkKind kind, int k, const Eigen::VectorXd& conj,
                            double s, double delta, double c, const Budgets& budgets = {});

/// ||(D^t)^{-1} M D^t||_p for diagonal positive D, p in {1, 2, inf}.
double dtp_norm(const Eigen::MatrixXd& m, const Eigen::VectorXd& d, double t, double p);

struct PotentialVectorCheck {
    bool contraction_ok = true;
    bool boundedness_ok = true;
    double worst_contraction = 0.0; // max over vertices of gamma(e)*||a||_r / delta^(1/s)
    double worst_boundedness = 0.0; // max pairwise product
};

/// Verifies Definition-style potential-vector conditions for per-edge weights
/// xi and positive gamma on one walk-tree, via the conjugate-norm form of the
/// contraction inequality.
PotentialVectorCheck check_potential_vector(const WalkTree& tree, const std::vector<double>& xi,
                                            const std::vector<double>& gamma, double s,
                                            double delta, double c);

/// Debug dump: one node per line, "depth endpoint [pinned s] weight".
std::string dump_walk_tree(const WalkTree& t, const std::vector<signed char>* sigma = nullptr,
                           const std::vector<double>* weight = nullptr);

} // namespace specind
