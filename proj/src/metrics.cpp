#include "linkbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "linkbench/types.hpp"

namespace linkbench {

double compute_auc(const std::vector<double>& positive_scores,
                   const std::vector<double>& negative_scores) {
    if (positive_scores.empty() || negative_scores.empty())
        throw NumericError("auc: both classes must be non-empty");

    struct Entry {
        double score;
        int label;
    };
    std::vector<Entry> entries;
    entries.reserve(positive_scores.size() + negative_scores.size());
    for (double s : positive_scores) entries.push_back({s, 1});
    for (double s : negative_scores) entries.push_back({s, 0});
    for (const Entry& e : entries)
        if (!std::isfinite(e.score)) throw NumericError("auc: non-finite score");

    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.score < b.score; });

    // midrank sum over positives
    double rank_sum = 0.0;
    std::size_t i = 0;
    while (i < entries.size()) {
        std::size_t j = i;
        while (j < entries.size() && entries[j].score == entries[i].score) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k)
            if (entries[k].label == 1) rank_sum += midrank;
        i = j;
    }
    const double np = static_cast<double>(positive_scores.size());
    const double nn = static_cast<double>(negative_scores.size());
    return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double compute_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) throw NumericError("auc: size mismatch");
    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < scores.size(); ++i)
        (labels[i] == 1 ? pos : neg).push_back(scores[i]);
    return compute_auc(pos, neg);
}

}  // namespace linkbench
