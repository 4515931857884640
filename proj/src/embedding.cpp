#include "linkbench/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "linkbench/rng.hpp"

namespace linkbench {

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// unigram^0.75 table for negative draws
std::vector<NodeId> build_negative_table(const Graph& g, std::size_t size) {
    std::vector<double> weight(g.node_count());
    double total = 0.0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        weight[v] = std::pow(static_cast<double>(g.degree(v)), 0.75);
        total += weight[v];
    }
    std::vector<NodeId> table;
    table.reserve(size);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const std::size_t count =
            static_cast<std::size_t>(std::ceil(weight[v] / total * static_cast<double>(size)));
        for (std::size_t i = 0; i < count; ++i) table.push_back(v);
    }
    return table;
}

}  // namespace

double NodeEmbedding::dot(NodeId u, NodeId v) const {
    const auto a = row(u), b = row(v);
    double s = 0.0;
    for (std::size_t i = 0; i < dims_; ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> NodeEmbedding::hadamard(NodeId u, NodeId v) const {
    const auto a = row(u), b = row(v);
    std::vector<double> out(dims_);
    for (std::size_t i = 0; i < dims_; ++i) out[i] = a[i] * b[i];
    return out;
}

NodeEmbedding train_node_embedding(const Graph& g, const EmbeddingOptions& opts,
                                   std::uint64_t seed) {
    if (g.edge_count() == 0) throw NumericError("node embedding: graph has no edges");
    const NodeId n = g.node_count();
    const std::size_t d = opts.dims;
    Rng rng(seed);

    NodeEmbedding emb(n, d);
    std::vector<double> context(n * d, 0.0);
    for (NodeId v = 0; v < n; ++v)
        for (std::size_t i = 0; i < d; ++i)
            emb.row_mut(v)[i] = (rng.real() - 0.5) / static_cast<double>(d);

    // walk corpus, regenerated per epoch from the same stream
    std::vector<NodeId> starts;
    for (NodeId v = 0; v < n; ++v)
        if (g.degree(v) > 0)
            for (std::size_t w = 0; w < opts.walks_per_node; ++w) starts.push_back(v);

    const std::vector<NodeId> neg_table = build_negative_table(g, 1 << 16);
    std::vector<NodeId> walk;
    walk.reserve(opts.walk_length);

    const std::size_t total_epochs = std::max<std::size_t>(1, opts.epochs);
    for (std::size_t epoch = 0; epoch < total_epochs; ++epoch) {
        double loss_sum = 0.0;
        std::size_t loss_count = 0;
        rng.shuffle(starts);
        const double progress_scale =
            1.0 / static_cast<double>(total_epochs * std::max<std::size_t>(1, starts.size()));
        for (std::size_t si = 0; si < starts.size(); ++si) {
            const double done =
                static_cast<double>(epoch * starts.size() + si) * progress_scale;
            const double lr = opts.learning_rate * std::max(1e-4, 1.0 - done);

            walk.clear();
            NodeId cur = starts[si];
            walk.push_back(cur);
            for (std::size_t step = 1; step < opts.walk_length; ++step) {
                const auto nbrs = g.neighbors(cur);
                if (nbrs.empty()) break;
                cur = nbrs[rng.below(nbrs.size())];
                walk.push_back(cur);
            }

            for (std::size_t pos = 0; pos < walk.size(); ++pos) {
                const NodeId center = walk[pos];
                const std::size_t lo = pos >= opts.window ? pos - opts.window : 0;
                const std::size_t hi = std::min(walk.size() - 1, pos + opts.window);
                for (std::size_t cpos = lo; cpos <= hi; ++cpos) {
                    if (cpos == pos) continue;
                    const NodeId target = walk[cpos];
                    auto in = emb.row_mut(center);
                    std::vector<double> grad_in(d, 0.0);
                    // positive target then negative samples
                    for (std::size_t k = 0; k <= opts.negatives; ++k) {
                        NodeId out_node;
                        double label;
                        if (k == 0) {
                            out_node = target;
                            label = 1.0;
                        } else {
                            out_node = neg_table[rng.below(neg_table.size())];
                            if (out_node == target) continue;
                            label = 0.0;
                        }
                        double* out = context.data() + out_node * d;
                        double z = 0.0;
                        for (std::size_t i = 0; i < d; ++i) z += in[i] * out[i];
                        const double p = sigmoid(z);
                        loss_sum += label > 0.5 ? -std::log(std::max(p, 1e-12))
                                                : -std::log(std::max(1.0 - p, 1e-12));
                        ++loss_count;
                        const double grad = (p - label) * lr;
                        for (std::size_t i = 0; i < d; ++i) {
                            grad_in[i] += grad * out[i];
                            out[i] -= grad * in[i];
                        }
                    }
                    for (std::size_t i = 0; i < d; ++i) in[i] -= grad_in[i];
                }
            }
        }
        emb.epoch_loss.push_back(loss_count ? loss_sum / static_cast<double>(loss_count) : 0.0);
    }
    return emb;
}

}  // namespace linkbench
