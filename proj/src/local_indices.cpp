#include "linkbench/local_indices.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace linkbench {

namespace {

std::vector<NodeId> common_neighbors(const Graph& g, NodeId u, NodeId v) {
    const auto a = g.neighbors(u), b = g.neighbors(v);
    std::vector<NodeId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

std::size_t common_neighbor_count(const Graph& g, NodeId u, NodeId v) {
    return common_neighbors(g, u, v).size();
}

double score_adamic_adar(const Graph& g, NodeId u, NodeId v) {
    double score = 0.0;
    // any common neighbor has degree >= 2, so ln(deg) > 0
    for (NodeId z : common_neighbors(g, u, v))
        score += 1.0 / std::log(static_cast<double>(g.degree(z)));
    return score;
}

double score_jaccard(const Graph& g, NodeId u, NodeId v) {
    const std::size_t common = common_neighbor_count(g, u, v);
    const std::size_t uni = g.degree(u) + g.degree(v) - common;
    return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

double score_preferential_attachment(const Graph& g, NodeId u, NodeId v) {
    return static_cast<double>(g.degree(u)) * static_cast<double>(g.degree(v));
}

double score_resource_allocation(const Graph& g, NodeId u, NodeId v) {
    double score = 0.0;
    for (NodeId z : common_neighbors(g, u, v))
        score += 1.0 / static_cast<double>(g.degree(z));
    return score;
}

}  // namespace linkbench
