#include "linkbench/forest.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "linkbench/rng.hpp"

namespace linkbench {

namespace {

// quantile cut points; at most bins-1 thresholds per feature
std::vector<double> bin_edges(std::vector<double> column, std::size_t bins) {
    std::sort(column.begin(), column.end());
    column.erase(std::unique(column.begin(), column.end()), column.end());
    if (column.size() <= bins) {
        std::vector<double> edges;
        for (std::size_t i = 0; i + 1 < column.size(); ++i)
            edges.push_back(0.5 * (column[i] + column[i + 1]));
        return edges;
    }
    std::vector<double> edges;
    for (std::size_t b = 1; b < bins; ++b) {
        const std::size_t idx = b * column.size() / bins;
        if (idx == 0 || idx >= column.size()) continue;
        // midpoint so a cut never coincides with an observed value
        edges.push_back(0.5 * (column[idx - 1] + column[idx]));
    }
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

double gini(double pos, double total) {
    if (total <= 0.0) return 0.0;
    const double p = pos / total;
    return 2.0 * p * (1.0 - p);
}

}  // namespace

std::size_t RandomForest::trees_total() const { return trees_.size(); }

void RandomForest::use_trees(std::size_t count) {
    trees_in_use_ = std::min(count, trees_.size());
}

void RandomForest::fit(const std::vector<std::vector<double>>& features,
                       const std::vector<int>& labels, std::uint64_t seed) {
    if (features.empty() || features.size() != labels.size())
        throw NumericError("forest fit: empty or mismatched training data");
    const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
    const bool has_neg = std::find(labels.begin(), labels.end(), 0) != labels.end();
    if (!has_pos || !has_neg) throw NumericError("forest fit: single-class training set");

    const std::size_t rows = features.size();
    const std::size_t dims = features.front().size();
    std::size_t total = opts_.trees;
    for (std::size_t s : opts_.size_grid) total = std::max(total, s);

    // quantile-binned columns shared by all trees
    std::vector<std::vector<double>> edges(dims);
    std::vector<std::vector<std::uint8_t>> binned(dims, std::vector<std::uint8_t>(rows));
    for (std::size_t j = 0; j < dims; ++j) {
        std::vector<double> col(rows);
        for (std::size_t i = 0; i < rows; ++i) col[i] = features[i][j];
        edges[j] = bin_edges(col, opts_.histogram_bins);
        for (std::size_t i = 0; i < rows; ++i) {
            const auto& e = edges[j];
            binned[j][i] = static_cast<std::uint8_t>(
                std::upper_bound(e.begin(), e.end(), features[i][j]) - e.begin());
        }
    }

    const std::size_t mtry =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(dims))));
    Rng rng(seed);
    trees_.clear();
    trees_.reserve(total);

    std::vector<std::size_t> feat_pool(dims);
    for (std::size_t j = 0; j < dims; ++j) feat_pool[j] = j;

    for (std::size_t t = 0; t < total; ++t) {
        Tree tree;
        std::vector<std::size_t> sample(rows);
        for (std::size_t i = 0; i < rows; ++i) sample[i] = rng.below(rows);

        // iterative build over (node, index range, depth)
        struct Work {
            int node;
            std::size_t lo, hi;
            std::size_t depth;
        };
        tree.nodes.push_back({});
        std::vector<Work> stack{{0, 0, sample.size(), 0}};
        while (!stack.empty()) {
            Work w = stack.back();
            stack.pop_back();
            double pos = 0.0;
            for (std::size_t i = w.lo; i < w.hi; ++i) pos += labels[sample[i]];
            const double count = static_cast<double>(w.hi - w.lo);

            auto make_leaf = [&]() {
                tree.nodes[w.node].feature = -1;
                tree.nodes[w.node].vote = 2.0 * pos >= count ? 1 : 0;
            };
            if (w.depth >= opts_.max_depth || pos == 0.0 || pos == count ||
                count <= 2.0 * opts_.min_leaf) {
                make_leaf();
                continue;
            }

            rng.shuffle(feat_pool);
            int best_feature = -1;
            std::uint8_t best_bin = 0;
            double best_score = gini(pos, count);
            std::array<double, 256> bin_pos{}, bin_cnt{};
            for (std::size_t fi = 0; fi < mtry; ++fi) {
                const std::size_t j = feat_pool[fi];
                const std::size_t nbins = edges[j].size() + 1;
                if (nbins < 2) continue;
                std::fill(bin_pos.begin(), bin_pos.begin() + nbins, 0.0);
                std::fill(bin_cnt.begin(), bin_cnt.begin() + nbins, 0.0);
                for (std::size_t i = w.lo; i < w.hi; ++i) {
                    const std::uint8_t b = binned[j][sample[i]];
                    bin_pos[b] += labels[sample[i]];
                    bin_cnt[b] += 1.0;
                }
                double lpos = 0.0, lcnt = 0.0;
                for (std::size_t b = 0; b + 1 < nbins; ++b) {
                    lpos += bin_pos[b];
                    lcnt += bin_cnt[b];
                    if (lcnt < opts_.min_leaf || count - lcnt < opts_.min_leaf) continue;
                    const double score = (lcnt * gini(lpos, lcnt) +
                                          (count - lcnt) * gini(pos - lpos, count - lcnt)) /
                                         count;
                    if (score + 1e-12 < best_score) {
                        best_score = score;
                        best_feature = static_cast<int>(j);
                        best_bin = static_cast<std::uint8_t>(b);
                    }
                }
            }
            if (best_feature < 0) {
                make_leaf();
                continue;
            }

            const double threshold = edges[best_feature][best_bin];
            auto mid = std::partition(sample.begin() + w.lo, sample.begin() + w.hi,
                                      [&](std::size_t i) {
                                          return binned[best_feature][i] <= best_bin;
                                      });
            const std::size_t split = static_cast<std::size_t>(mid - sample.begin());
            if (split == w.lo || split == w.hi) {
                make_leaf();
                continue;
            }
            const int left = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back({});
            tree.nodes.push_back({});
            tree.nodes[w.node].feature = best_feature;
            tree.nodes[w.node].threshold = threshold;
            tree.nodes[w.node].left = left;
            tree.nodes[w.node].right = left + 1;
            stack.push_back({left, w.lo, split, w.depth + 1});
            stack.push_back({left + 1, split, w.hi, w.depth + 1});
        }
        trees_.push_back(std::move(tree));
    }
    trees_in_use_ = std::min(opts_.trees, trees_.size());
}

double RandomForest::predict(const std::vector<double>& features) const {
    if (trees_.empty()) throw NumericError("forest predict: model not fitted");
    double votes = 0.0;
    for (std::size_t t = 0; t < trees_in_use_; ++t) {
        const Tree& tree = trees_[t];
        int node = 0;
        while (tree.nodes[node].feature >= 0) {
            const Node& nd = tree.nodes[node];
            node = features[nd.feature] <= nd.threshold ? nd.left : nd.right;
        }
        votes += tree.nodes[node].vote;
    }
    return votes / static_cast<double>(trees_in_use_);
}

}  // namespace linkbench
