#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "linkbench/graph.hpp"

namespace linkbench {

struct EmbeddingOptions {
    std::size_t dims = 64;
    std::size_t walks_per_node = 10;
    std::size_t walk_length = 40;
    std::size_t window = 5;
    std::size_t negatives = 5;
    std::size_t epochs = 3;
    double learning_rate = 0.025;
};

/// Per-node vectors learned by skip-gram with negative sampling over seeded
/// unbiased random walks.
class NodeEmbedding {
public:
    NodeEmbedding(std::size_t node_count, std::size_t dims)
        : dims_(dims), data_(node_count * dims, 0.0) {}

    std::size_t dims() const { return dims_; }
    std::size_t node_count() const { return data_.size() / dims_; }
    std::span<const double> row(NodeId v) const { return {data_.data() + v * dims_, dims_}; }
    std::span<double> row_mut(NodeId v) { return {data_.data() + v * dims_, dims_}; }

    double dot(NodeId u, NodeId v) const;
    /// Elementwise product of the endpoint rows (Hadamard edge feature).
    std::vector<double> hadamard(NodeId u, NodeId v) const;

    std::vector<double> epoch_loss;  // mean skip-gram loss per epoch

private:
    std::size_t dims_;
    std::vector<double> data_;
};

NodeEmbedding train_node_embedding(const Graph& g, const EmbeddingOptions& opts,
                                   std::uint64_t seed);

}  // namespace linkbench
