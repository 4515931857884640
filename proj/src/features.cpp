#include "linkbench/features.hpp"

#include <algorithm>
#include <array>

#include "linkbench/local_indices.hpp"

namespace linkbench {

namespace {

constexpr std::array<const char*, FeatureExtractor::kDims> kNames = {
    "deg_min",          "deg_max",    "common_neighbors",
    "adamic_adar",      "jaccard",    "resource_allocation",
    "pref_attachment",  "clust_min",  "clust_max",
    "distance",         "pr_min",     "pr_max",
    "same_community",
};

}  // namespace

const char* FeatureExtractor::feature_name(std::size_t index) {
    return kNames.at(index);
}

FeatureExtractor::FeatureExtractor(const Graph& g, std::uint64_t seed)
    : g_(g),
      pagerank_(pagerank(g)),
      clustering_(g.node_count()),
      partition_(modularity_partition(g, seed)),
      dist_rows_(g.node_count()) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
        clustering_[v] = clustering_coefficient(g, v);
        dist_rows_[v] = bfs_distances(g, v);
    }
}

std::vector<double> FeatureExtractor::extract(NodePair p) const {
    g_.check_id(p.u);
    g_.check_id(p.v);
    const double du = static_cast<double>(g_.degree(p.u));
    const double dv = static_cast<double>(g_.degree(p.v));
    const double dlo = std::min(du, dv), dhi = std::max(du, dv);
    const double clo = std::min(clustering_[p.u], clustering_[p.v]);
    const double chi = std::max(clustering_[p.u], clustering_[p.v]);
    const double plo = std::min(pagerank_[p.u], pagerank_[p.v]);
    const double phi = std::max(pagerank_[p.u], pagerank_[p.v]);
    const std::uint32_t raw_dist = dist_rows_[p.u][p.v];
    const double dist = raw_dist == UINT32_MAX
                            ? 2.0 * static_cast<double>(g_.node_count())
                            : static_cast<double>(raw_dist);
    return {
        dlo,
        dhi,
        static_cast<double>(common_neighbor_count(g_, p.u, p.v)),
        score_adamic_adar(g_, p.u, p.v),
        score_jaccard(g_, p.u, p.v),
        score_resource_allocation(g_, p.u, p.v),
        score_preferential_attachment(g_, p.u, p.v),
        clo,
        chi,
        dist,
        plo,
        phi,
        partition_.block_of[p.u] == partition_.block_of[p.v] ? 1.0 : 0.0,
    };
}

}  // namespace linkbench
