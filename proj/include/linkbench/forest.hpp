#pragma once

#include <cstdint>
#include <vector>

#include "linkbench/types.hpp"

namespace linkbench {

struct ForestOptions {
    std::size_t trees = 100;
    std::size_t max_depth = 10;
    std::size_t min_leaf = 1;
    std::size_t histogram_bins = 32;
    std::vector<std::size_t> size_grid{50, 100, 200};  // validation picks among these
};

/// Bootstrap-aggregated binary decision trees with Gini splits over
/// quantile-binned feature thresholds. Score is the fraction of trees voting
/// for the positive class.
class RandomForest {
public:
    explicit RandomForest(ForestOptions opts = {}) : opts_(opts) {}

    void fit(const std::vector<std::vector<double>>& features, const std::vector<int>& labels,
             std::uint64_t seed);

    /// Restrict prediction to the first `count` trees (validation-driven).
    void use_trees(std::size_t count);
    std::size_t trees_in_use() const { return trees_in_use_; }
    std::size_t trees_total() const;

    double predict(const std::vector<double>& features) const;

private:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1, right = -1;
        int vote = 0;  // leaf majority class
    };
    struct Tree {
        std::vector<Node> nodes;
    };

    ForestOptions opts_;
    std::vector<Tree> trees_;
    std::size_t trees_in_use_ = 0;
};

}  // namespace linkbench
