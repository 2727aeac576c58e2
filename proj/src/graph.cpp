#include "specind/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace specind {

namespace {

void check_connected(int n, const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    if (reached != n)
        throw DisconnectedGraph("graph is not connected (" + std::to_string(reached) + " of " +
                                std::to_string(n) + " vertices reachable)");
}

} // namespace

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : n_(n) {
    if (n < 1)
        throw InvalidParams("graph needs at least one vertex");
    adj_.assign(n, {});
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ParseError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                             ") out of range for n=" + std::to_string(n));
        if (u == v)
            throw SelfLoop("self-loop at vertex " + std::to_string(u));
        auto key = std::minmax(u, v);
        if (!seen.insert(key).second)
            throw DuplicateEdge("duplicate edge (" + std::to_string(key.first) + "," +
                                std::to_string(key.second) + ")");
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    m_ = static_cast<int>(seen.size());
    for (auto& nb : adj_) {
        std::sort(nb.begin(), nb.end());
        max_degree_ = std::max(max_degree_, static_cast<int>(nb.size()));
    }
    check_connected(n_, adj_);
}

bool Graph::has_edge(int u, int v) const {
    const auto& nb = adj_[u];
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<int, int>> Graph::edge_list() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(m_);
    for (int u = 0; u < n_; ++u)
        for (int v : adj_[u])
            if (u < v)
                out.emplace_back(u, v);
    return out;
}

Graph load_graph(std::istream& in, GraphFormat format) {
    if (format == GraphFormat::json) {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad JSON graph: ") + e.what());
        }
        if (!j.contains("n") || !j.contains("edges"))
            throw ParseError("JSON graph needs fields \"n\" and \"edges\"");
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() != 2)
                throw ParseError("JSON edge must be a pair [u,v]");
            edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
        return Graph(j["n"].get<int>(), edges);
    }

    std::vector<std::pair<int, int>> edges;
    int declared_n = -1;
    int max_id = -1;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first))
            continue;
        if (first == "n") {
            if (!(ls >> declared_n))
                throw ParseError("bad header line: " + line);
            continue;
        }
        int u, v;
        try {
            u = std::stoi(first);
        } catch (...) {
            throw ParseError("bad edge line: " + line);
        }
        if (!(ls >> v))
            throw ParseError("bad edge line: " + line);
        if (u < 0 || v < 0)
            throw ParseError("negative vertex id in line: " + line);
        edges.emplace_back(u, v);
        max_id = std::max({max_id, u, v});
    }
    if (declared_n >= 0) {
        if (max_id >= declared_n)
            throw ParseError("edge ids exceed declared vertex count");
        if (declared_n < 1)
            throw ParseError("declared vertex count must be positive");
        return Graph(declared_n, edges);
    }
    // no header: relabel ids to 0..n-1 in order of first appearance
    std::vector<int> relabel(max_id + 1, -1);
    int next_id = 0;
    for (auto& [u, v] : edges) {
        if (relabel[u] < 0)
            relabel[u] = next_id++;
        if (relabel[v] < 0)
            relabel[v] = next_id++;
        u = relabel[u];
        v = relabel[v];
    }
    if (next_id < 1)
        throw ParseError("no vertices in edge-list input");
    return Graph(next_id, edges);
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path);
    auto format = path.size() > 5 && path.substr(path.size() - 5) == ".json" ? GraphFormat::json
                                                                             : GraphFormat::edge_list;
    return load_graph(in, format);
}

Graph make_path(int n) {
    if (n < 1)
        throw InvalidParams("path needs n >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i)
        edges.emplace_back(i, i + 1);
    return Graph(n, edges);
}

Graph make_cycle(int n) {
    if (n < 3)
        throw InvalidParams("cycle needs n >= 3");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        edges.emplace_back(i, (i + 1) % n);
    return Graph(n, edges);
}

Graph make_complete(int n) {
    if (n < 1)
        throw InvalidParams("complete graph needs n >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            edges.emplace_back(u, v);
    return Graph(n, edges);
}

Graph make_star(int leaves) {
    if (leaves < 1)
        throw InvalidParams("star needs at least one leaf");
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= leaves; ++i)
        edges.emplace_back(0, i);
    return Graph(leaves + 1, edges);
}

Graph make_grid(int rows, int cols) {
    if (rows < 1 || cols < 1)
        throw InvalidParams("grid needs positive dimensions");
    auto id = [cols](int r, int c) { return r * cols + c; };
    std::vector<std::pair<int, int>> edges;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols)
                edges.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows)
                edges.emplace_back(id(r, c), id(r + 1, c));
        }
    return Graph(rows * cols, edges);
}

Graph make_random_tree(int n, std::uint64_t seed) {
    if (n < 1)
        throw InvalidParams("tree needs n >= 1");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        edges.emplace_back(pick(rng), v);
    }
    return Graph(n, edges);
}

Graph make_erdos_renyi(int n, double p, std::uint64_t seed) {
    if (n < 1 || p < 0.0 || p > 1.0)
        throw InvalidParams("erdos_renyi needs n >= 1 and p in [0,1]");
    std::mt19937_64 rng(seed);
    constexpr int kMaxRetries = 200;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                if (x < p)
                    edges.emplace_back(u, v);
            }
        try {
            return Graph(n, edges);
        } catch (const DisconnectedGraph&) {
            continue;
        }
    }
    throw InvalidParams("erdos_renyi: no connected sample in " + std::to_string(kMaxRetries) +
                        " attempts (n=" + std::to_string(n) + ", p=" + std::to_string(p) + ")");
}

Graph make_graph_from_spec(const std::string& spec) {
    std::vector<std::string> parts;
    std::istringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':'))
        parts.push_back(tok);
    if (parts.empty())
        throw InvalidParams("empty graph spec");
    const std::string& kind = parts[0];
    auto arg = [&](std::size_t i) -> const std::string& {
        if (i >= parts.size())
            throw InvalidParams("graph spec \"" + spec + "\" is missing arguments");
        return parts[i];
    };
    try {
        if (kind == "path")
            return make_path(std::stoi(arg(1)));
        if (kind == "cycle")
            return make_cycle(std::stoi(arg(1)));
        if (kind == "complete")
            return make_complete(std::stoi(arg(1)));
        if (kind == "star")
            return make_star(std::stoi(arg(1)));
        if (kind == "grid") {
            auto x = arg(1).find('x');
            if (x == std::string::npos)
                throw InvalidParams("grid spec wants grid:RxC");
            return make_grid(std::stoi(arg(1).substr(0, x)), std::stoi(arg(1).substr(x + 1)));
        }
        if (kind == "random_tree")
            return make_random_tree(std::stoi(arg(1)), std::stoull(arg(2)));
        if (kind == "erdos_renyi")
            return make_erdos_renyi(std::stoi(arg(1)), std::stod(arg(2)), std::stoull(arg(3)));
    } catch (const std::invalid_argument&) {
        throw InvalidParams("bad number in graph spec \"" + spec + "\"");
    }
    throw InvalidParams("unknown graph kind \"" + kind + "\"");
}

Eigen::MatrixXd adjacency_matrix(const Graph& g) {
    int n = g.num_vertices();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int u = 0; u < n; ++u)
        for (int v : g.neighbors(u))
            a(u, v) = 1.0;
    return a;
}

Eigen::MatrixXd degree_matrix(const Graph& g) {
    int n = g.num_vertices();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int u = 0; u < n; ++u)
        d(u, u) = g.degree(u);
    return d;
}

StructMatrices struct_matrices(const Graph& g, const Budgets& budgets) {
    int n = g.num_vertices();
    StructMatrices out;
    out.A = adjacency_matrix(g);
    out.D = degree_matrix(g);

    for (int u = 0; u < n; ++u)
        for (int v : g.neighbors(u))
            out.oriented_edges.push_back({u, v});
    int me = static_cast<int>(out.oriented_edges.size());

    if (static_cast<std::size_t>(me) * static_cast<std::size_t>(me) > budgets.matrix_cells)
        throw BudgetExceeded("non-backtracking matrix needs " + std::to_string(me) + "^2 cells");

    std::vector<std::vector<int>> edge_index(n, std::vector<int>(n, -1));
    for (int e = 0; e < me; ++e)
        edge_index[out.oriented_edges[e].tail][out.oriented_edges[e].head] = e;
    out.reverse_index.resize(me);
    for (int e = 0; e < me; ++e)
        out.reverse_index[e] = edge_index[out.oriented_edges[e].head][out.oriented_edges[e].tail];

    out.H = Eigen::MatrixXd::Zero(me, me);
    for (int e = 0; e < me; ++e) {
        auto [u, w] = out.oriented_edges[e];
        for (int y : g.neighbors(w)) {
            if (y == u)
                continue; // backtracking
            out.H(e, edge_index[w][y]) = 1.0;
        }
    }

    out.K = Eigen::MatrixXd::Zero(n, me);
    out.C = Eigen::MatrixXd::Zero(me, n);
    for (int e = 0; e < me; ++e) {
        out.K(out.oriented_edges[e].tail, e) = 1.0;
        out.C(e, out.oriented_edges[e].head) = 1.0;
    }
    return out;
}

GraphDiagnostics validate(const Graph& g) {
    // Graph construction already enforces simplicity and connectivity.
    GraphDiagnostics d;
    d.n = g.num_vertices();
    d.num_edges = g.num_edges();
    d.max_degree = g.max_degree();
    return d;
}

} // namespace specind
