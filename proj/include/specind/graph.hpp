#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "specind/budgets.hpp"
#include "specind/errors.hpp"

namespace specind {

/// Finite simple connected undirected graph with vertex ids 0..n-1.
/// Adjacency lists are kept sorted; the ascending vertex id is the canonical
/// total ordering used everywhere (walk-tree child order, boundary rules).
class Graph {
  public:
    Graph(int n, const std::vector<std::pair<int, int>>& edges);

    int num_vertices() const { return n_; }
    int num_edges() const { return m_; }
    int max_degree() const { return max_degree_; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    bool has_edge(int u, int v) const;
    std::vector<std::pair<int, int>> edge_list() const;

  private:
    int n_ = 0;
    int m_ = 0;
    int max_degree_ = 0;
    std::vector<std::vector<int>> adj_;
};

struct OrientedEdge {
    int tail = -1;
    int head = -1;
};

/// Structural matrices of a graph: adjacency A, degree D, non-backtracking H
/// over oriented edges, and the incidence selectors K (vertex x oriented edge)
/// and C (oriented edge x vertex). Oriented edges are enumerated in
/// lexicographic (tail, head) order, which fixes all matrix indexings.
struct StructMatrices {
    Eigen::MatrixXd A;
    Eigen::MatrixXd D;
    Eigen::MatrixXd H;
    Eigen::MatrixXd K;
    Eigen::MatrixXd C;
    std::vector<OrientedEdge> oriented_edges;
    std::vector<int> reverse_index; // index of (head, tail) for each oriented edge
};

struct GraphDiagnostics {
    int n = 0;
    int num_edges = 0;
    int max_degree = 0;
    bool simple = true;
    bool connected = true;
};

enum class GraphFormat { edge_list, json };

/// Parses "u v" pairs (optional "n <count>" header, '#' comments) or the JSON
/// form {"n": int, "edges": [[u,v],...]}. Vertices keep their 0-based ids.
Graph load_graph(std::istream& in, GraphFormat format);
Graph load_graph_file(const std::string& path);

Graph make_path(int n);
Graph make_cycle(int n);
Graph make_complete(int n);
Graph make_star(int leaves);
Graph make_grid(int rows, int cols);
Graph make_random_tree(int n, std::uint64_t seed);
Graph make_erdos_renyi(int n, double p, std::uint64_t seed);

/// Parses compact generator specs like "cycle:5", "grid:2x3",
/// "random_tree:8:7" or "erdos_renyi:8:0.4:7".
Graph make_graph_from_spec(const std::string& spec);

StructMatrices struct_matrices(const Graph& g, const Budgets& budgets = {});
Eigen::MatrixXd adjacency_matrix(const Graph& g);
Eigen::MatrixXd degree_matrix(const Graph& g);

GraphDiagnostics validate(const Graph& g);

} // namespace specind
