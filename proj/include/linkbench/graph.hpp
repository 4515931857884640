#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "linkbench/rng.hpp"
#include "linkbench/types.hpp"

namespace linkbench {

/// Immutable undirected simple graph with dense node ids. Adjacency lists are
/// sorted; all queries are read-only and safe to call concurrently.
class Graph {
public:
    /// Build from edges over dense ids 0..n-1. Labels default to the ids.
    Graph(NodeId node_count, std::vector<NodePair> edges,
          std::vector<std::string> labels = {});

    NodeId node_count() const { return static_cast<NodeId>(adj_.size()); }
    std::size_t edge_count() const { return edges_.size(); }

    std::span<const NodeId> neighbors(NodeId v) const;
    std::size_t degree(NodeId v) const { return neighbors(v).size(); }
    bool has_edge(NodeId u, NodeId v) const;
    bool has_edge(NodePair p) const { return has_edge(p.u, p.v); }

    /// Edges in canonical sorted order.
    const std::vector<NodePair>& edges() const { return edges_; }
    EdgeSet edge_set() const;

    const std::string& label(NodeId v) const { return labels_.at(v); }
    const std::vector<std::string>& labels() const { return labels_; }

    void check_id(NodeId v) const;

private:
    std::vector<std::vector<NodeId>> adj_;
    std::vector<NodePair> edges_;
    std::vector<std::string> labels_;
};

/// Parse a whitespace-separated edge list ('#' comments and blank lines
/// ignored). Tokens map to dense ids in first-seen order; duplicate edges are
/// collapsed. Self-loops and malformed lines are errors.
Graph load_edge_list(const std::string& path);
Graph parse_edge_list(const std::string& text, const std::string& origin = "<string>");

/// Edges of g with both endpoints in `nodes`.
EdgeSet induced_edges(const Graph& g, std::span<const NodeId> nodes);

/// PageRank with uniform teleport; dangling mass is spread uniformly.
/// Throws NumericError if the iteration fails to reach `tol` (L1) within
/// `max_iter` sweeps.
std::vector<double> pagerank(const Graph& g, double damping = 0.85,
                             double tol = 1e-10, std::size_t max_iter = 1000);

/// A shortest u-v path drawn uniformly from all shortest paths, or nullopt if
/// u and v are disconnected. u == v yields the single-node path.
std::optional<std::vector<NodeId>> shortest_path(const Graph& g, NodeId u, NodeId v,
                                                 std::uint64_t seed);

/// BFS hop distances from source; unreachable nodes get UINT32_MAX.
std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source);

/// Connected components as a label per node plus the component count.
struct Components {
    std::vector<NodeId> component_of;
    std::size_t count = 0;
    std::vector<std::vector<NodeId>> members() const;
};
Components connected_components(const Graph& g);

}  // namespace linkbench
