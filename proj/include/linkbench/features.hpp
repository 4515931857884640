#pragma once

#include <cstdint>
#include <vector>

#include "linkbench/community.hpp"
#include "linkbench/graph.hpp"

namespace linkbench {

/// Fixed-order topological pair features for the stacking predictor. Graph-wide
/// quantities (PageRank, clustering, modularity partition, all-pairs BFS
/// distances) are computed once at construction, so extract() is const and safe
/// to call concurrently.
class FeatureExtractor {
public:
    explicit FeatureExtractor(const Graph& g, std::uint64_t seed);

    static constexpr std::size_t kDims = 13;
    static const char* feature_name(std::size_t index);

    /// Order: deg_min, deg_max, common_neighbors, adamic_adar, jaccard,
    /// resource_allocation, preferential_attachment, clust_min, clust_max,
    /// distance (2n when disconnected), pagerank_min, pagerank_max,
    /// same_community.
    std::vector<double> extract(NodePair p) const;

private:
    const Graph& g_;
    std::vector<double> pagerank_;
    std::vector<double> clustering_;
    Partition partition_;
    std::vector<std::vector<std::uint32_t>> dist_rows_;  // one BFS row per node
};

}  // namespace linkbench
