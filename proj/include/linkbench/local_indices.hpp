#pragma once

#include "linkbench/graph.hpp"

namespace linkbench {

std::size_t common_neighbor_count(const Graph& g, NodeId u, NodeId v);

/// sum over common neighbors z of 1/ln(deg z)
double score_adamic_adar(const Graph& g, NodeId u, NodeId v);

/// |common| / |union|, 0 when both neighborhoods are empty
double score_jaccard(const Graph& g, NodeId u, NodeId v);

double score_preferential_attachment(const Graph& g, NodeId u, NodeId v);

/// sum over common neighbors z of 1/deg(z)
double score_resource_allocation(const Graph& g, NodeId u, NodeId v);

}  // namespace linkbench
