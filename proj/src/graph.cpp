#include "linkbench/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

namespace linkbench {

std::vector<NodePair> EdgeSet::sorted() const {
    std::vector<NodePair> out(set_.begin(), set_.end());
    std::sort(out.begin(), out.end());
    return out;
}

EdgeSet EdgeSet::difference(const EdgeSet& other) const {
    EdgeSet out;
    for (const NodePair& p : set_)
        if (!other.contains(p)) out.insert(p);
    return out;
}

Graph::Graph(NodeId node_count, std::vector<NodePair> edges, std::vector<std::string> labels)
    : adj_(node_count), labels_(std::move(labels)) {
    if (node_count == 0) throw DataError("Graph: empty node set");
    if (labels_.empty()) {
        labels_.reserve(node_count);
        for (NodeId v = 0; v < node_count; ++v) labels_.push_back(std::to_string(v));
    }
    if (labels_.size() != node_count) throw DataError("Graph: label count mismatch");

    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (const NodePair& e : edges) {
        if (e.v >= node_count)
            throw DataError("Graph: edge endpoint " + std::to_string(e.v) + " out of range");
        adj_[e.u].push_back(e.v);
        adj_[e.v].push_back(e.u);
    }
    for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
    edges_ = std::move(edges);

    // Handshake identity; symmetry holds by construction.
    std::size_t degree_sum = 0;
    for (const auto& nbrs : adj_) degree_sum += nbrs.size();
    if (degree_sum != 2 * edges_.size()) throw DataError("Graph: handshake identity violated");
}

std::span<const NodeId> Graph::neighbors(NodeId v) const {
    check_id(v);
    return adj_[v];
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    check_id(u);
    check_id(v);
    if (u == v) return false;
    const auto& nbrs = adj_[u];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

EdgeSet Graph::edge_set() const {
    EdgeSet s;
    for (const NodePair& e : edges_) s.insert(e);
    return s;
}

void Graph::check_id(NodeId v) const {
    if (v >= adj_.size())
        throw DataError("node id " + std::to_string(v) + " out of range (n=" +
                        std::to_string(adj_.size()) + ")");
}

Graph parse_edge_list(const std::string& text, const std::string& origin) {
    std::unordered_map<std::string, NodeId> index;
    std::vector<std::string> labels;
    std::vector<NodePair> edges;
    auto intern = [&](const std::string& tok) {
        auto [it, fresh] = index.emplace(tok, static_cast<NodeId>(labels.size()));
        if (fresh) labels.push_back(tok);
        return it->second;
    };

    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a)) continue;           // blank
        if (a[0] == '#') continue;          // comment
        if (!(ls >> b))
            throw ParseError(origin + ":" + std::to_string(lineno) + ": expected two tokens");
        if (ls >> extra)
            throw ParseError(origin + ":" + std::to_string(lineno) + ": trailing token '" +
                             extra + "'");
        if (a == b)
            throw DataError(origin + ":" + std::to_string(lineno) + ": self-loop on '" + a + "'");
        NodeId u = intern(a), v = intern(b);
        edges.emplace_back(u, v);
    }
    if (labels.empty()) throw DataError(origin + ": no edges found");
    const NodeId node_count = static_cast<NodeId>(labels.size());
    return Graph(node_count, std::move(edges), std::move(labels));
}

Graph load_edge_list(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open edge list: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_edge_list(buf.str(), path);
}

EdgeSet induced_edges(const Graph& g, std::span<const NodeId> nodes) {
    std::vector<char> in(g.node_count(), 0);
    for (NodeId v : nodes) {
        g.check_id(v);
        in[v] = 1;
    }
    EdgeSet out;
    for (NodeId v : nodes)
        for (NodeId w : g.neighbors(v))
            if (v < w && in[w]) out.insert(NodePair(v, w));
    return out;
}

std::vector<double> pagerank(const Graph& g, double damping, double tol, std::size_t max_iter) {
    const NodeId n = g.node_count();
    std::vector<double> score(n, 1.0 / n), next(n);
    for (std::size_t it = 0; it < max_iter; ++it) {
        double dangling = 0.0;
        for (NodeId v = 0; v < n; ++v)
            if (g.degree(v) == 0) dangling += score[v];
        const double base = (1.0 - damping) / n + damping * dangling / n;
        std::fill(next.begin(), next.end(), base);
        for (NodeId v = 0; v < n; ++v) {
            if (g.degree(v) == 0) continue;
            const double share = damping * score[v] / static_cast<double>(g.degree(v));
            for (NodeId w : g.neighbors(v)) next[w] += share;
        }
        double delta = 0.0;
        for (NodeId v = 0; v < n; ++v) delta += std::fabs(next[v] - score[v]);
        score.swap(next);
        if (delta < tol) return score;
    }
    throw NumericError("pagerank: no convergence after " + std::to_string(max_iter) +
                       " iterations");
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source) {
    g.check_id(source);
    std::vector<std::uint32_t> dist(g.node_count(), UINT32_MAX);
    std::deque<NodeId> q{source};
    dist[source] = 0;
    while (!q.empty()) {
        NodeId v = q.front();
        q.pop_front();
        for (NodeId w : g.neighbors(v))
            if (dist[w] == UINT32_MAX) {
                dist[w] = dist[v] + 1;
                q.push_back(w);
            }
    }
    return dist;
}

std::optional<std::vector<NodeId>> shortest_path(const Graph& g, NodeId u, NodeId v,
                                                 std::uint64_t seed) {
    g.check_id(u);
    g.check_id(v);
    if (u == v) return std::vector<NodeId>{u};

    // BFS from v; sigma[w] counts shortest w-v paths so the forward walk from
    // u can pick each full path with equal probability.
    std::vector<std::uint32_t> dist(g.node_count(), UINT32_MAX);
    std::vector<double> sigma(g.node_count(), 0.0);
    std::deque<NodeId> q{v};
    dist[v] = 0;
    sigma[v] = 1.0;
    while (!q.empty()) {
        NodeId x = q.front();
        q.pop_front();
        for (NodeId w : g.neighbors(x)) {
            if (dist[w] == UINT32_MAX) {
                dist[w] = dist[x] + 1;
                q.push_back(w);
            }
            if (dist[w] == dist[x] + 1) sigma[w] += sigma[x];
        }
    }
    if (dist[u] == UINT32_MAX) return std::nullopt;

    Rng rng(seed);
    std::vector<NodeId> path{u};
    NodeId cur = u;
    std::vector<NodeId> options;
    std::vector<double> weights;
    while (cur != v) {
        options.clear();
        weights.clear();
        for (NodeId w : g.neighbors(cur))
            if (dist[w] + 1 == dist[cur]) {
                options.push_back(w);
                weights.push_back(sigma[w]);
            }
        cur = options[rng.weighted(weights)];
        path.push_back(cur);
    }
    return path;
}

Components connected_components(const Graph& g) {
    Components c;
    c.component_of.assign(g.node_count(), UINT32_MAX);
    for (NodeId s = 0; s < g.node_count(); ++s) {
        if (c.component_of[s] != UINT32_MAX) continue;
        const NodeId id = static_cast<NodeId>(c.count++);
        std::deque<NodeId> q{s};
        c.component_of[s] = id;
        while (!q.empty()) {
            NodeId x = q.front();
            q.pop_front();
            for (NodeId w : g.neighbors(x))
                if (c.component_of[w] == UINT32_MAX) {
                    c.component_of[w] = id;
                    q.push_back(w);
                }
        }
    }
    return c;
}

std::vector<std::vector<NodeId>> Components::members() const {
    std::vector<std::vector<NodeId>> out(count);
    for (NodeId v = 0; v < component_of.size(); ++v) out[component_of[v]].push_back(v);
    return out;
}

}  // namespace linkbench
