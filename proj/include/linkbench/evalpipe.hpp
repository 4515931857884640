#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linkbench/graph.hpp"
#include "linkbench/predictors.hpp"
#include "linkbench/sampling.hpp"

namespace linkbench {

/// Sampler-matched negative pools: `observed` plays the role of the sampled
/// non-edges (negatives available for training/validation) and `heldout` the
/// remaining non-edges (negative test pool). Both are deduplicated non-edges
/// of the true graph, capped uniformly.
struct NegativePools {
    std::vector<NodePair> observed;  // sampled negatives
    std::vector<NodePair> heldout;   // held-out negatives
};

NegativePools build_negative_pool(const Graph& g, const SamplerSpec& spec, double rho,
                                  std::uint64_t seed, std::size_t pool_cap = 200000);

struct SplitPlan {
    std::vector<NodePair> e_tr, e_val;           // positive train/validation from E'
    std::vector<NodePair> y;                     // positive test = E - E'
    std::vector<NodePair> neg_tr, neg_val;       // negatives from the observed pool
    std::vector<NodePair> neg_test;              // negatives from the held-out pool
    int repeat = 0, fold = 0;
    std::uint64_t seed = 0;
};

/// Rotate validation fold `fold` of `folds` inside E'; throws DataError when E'
/// has fewer edges than folds. The shuffle driving the rotation is a function
/// of `seed` only, so the folds of one repeat partition E' exactly.
SplitPlan make_split(const Graph& g, const SampleOutcome& outcome, const NegativePools& pools,
                     int repeat, int fold, int folds, std::uint64_t seed);

/// Consistency assertions for a split (disjointness, non-edge membership);
/// throws DataError with the violated condition.
void validate_split(const Graph& g, const SampleOutcome& outcome, const SplitPlan& plan);

enum class SplitPart { Train, Val, Test };

struct BalancedSet {
    std::vector<NodePair> pairs;
    std::vector<int> labels;  // first `size` entries 1, then `size` entries 0
};

/// Draw `size` positives and `size` negatives uniformly with replacement from
/// the designated pools of the plan. Throws DataError naming any empty pool.
BalancedSet balance_resample(const SplitPlan& plan, SplitPart part, std::size_t size,
                             std::uint64_t seed);

struct AucRecord {
    std::string network, domain, sampler, predictor;
    int repeat = 0, fold = 0;
    std::optional<double> auc;  // empty when the cell failed
    NodeId n = 0;
    std::size_t m = 0;
    std::uint64_t seed = 0;
    std::string status = "ok";  // failure reason otherwise
};

struct EvalOptions {
    int repeats = 5;
    int folds = 5;
    double rho = 0.8;
    std::size_t balanced_size = 10000;
    std::size_t pool_cap = 200000;
    bool redraw_per_fold = false;  // sensitivity switch: fresh E' per fold
    SamplerParams sampler_params;
    PredictorConfig predictor;
};

/// Full protocol for one (network, sampler, predictor) cell: per repeat a fresh
/// sample and negative pools, rotating validation folds inside E', balanced
/// resampling, rank-based AUC on the balanced test set. Failures are recorded
/// per (repeat, fold) with their reason; the cell always yields
/// repeats x folds records.
std::vector<AucRecord> run_cell(const Graph& g, const std::string& network,
                                const std::string& domain, SamplerKind sampler,
                                PredictorKind predictor, const EvalOptions& opts,
                                std::uint64_t master_seed);

}  // namespace linkbench
