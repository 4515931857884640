#pragma once

#include <vector>

namespace linkbench {

/// Rank-based AUC (Mann-Whitney with midranks for ties): the probability that
/// a random positive outscores a random negative, counting ties as 1/2.
/// Throws NumericError if either class is empty or any score is non-finite.
double compute_auc(const std::vector<double>& positive_scores,
                   const std::vector<double>& negative_scores);

double compute_auc(const std::vector<double>& scores, const std::vector<int>& labels);

}  // namespace linkbench
