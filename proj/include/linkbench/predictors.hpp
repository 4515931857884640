#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "linkbench/embedding.hpp"
#include "linkbench/forest.hpp"
#include "linkbench/graph.hpp"
#include "linkbench/logistic.hpp"

namespace linkbench {

enum class PredictorKind {
    AdamicAdar,
    Jaccard,
    PreferentialAttachment,
    N2vDot,
    N2vEdge,
    Spectral,
    Modularity,
    MdlDcsbm,
    TopStacking,
};

inline constexpr std::size_t kPredictorCount = 9;

const char* predictor_name(PredictorKind kind);
PredictorKind predictor_from_name(const std::string& name);  // DataError on unknown
std::vector<PredictorKind> all_predictors();

struct PredictorConfig {
    EmbeddingOptions embedding;
    std::size_t spectral_dims = 16;
    LogisticRegression::Options logistic;
    ForestOptions forest;
    int dcsbm_restarts = 3;
};

struct LabeledPairs {
    std::vector<NodePair> pairs;
    std::vector<int> labels;  // 1 = true edge, 0 = non-edge

    std::size_t size() const { return pairs.size(); }
    bool has_both_classes() const;
};

/// Two-phase predictor: fit_graph learns everything that depends only on the
/// observed graph (reusable across folds); fit_pairs trains the supervised
/// head where one exists, and is a no-op for closed-form scores. A fitted
/// model's score() is const and safe to call concurrently.
class LinkPredictor {
public:
    virtual ~LinkPredictor() = default;

    virtual PredictorKind kind() const = 0;
    virtual void fit_graph(const Graph& g, std::uint64_t seed) = 0;
    virtual void fit_pairs(const LabeledPairs& train, const LabeledPairs& val,
                           std::uint64_t seed) = 0;
    virtual double score(NodePair p) const = 0;
};

std::unique_ptr<LinkPredictor> make_predictor(PredictorKind kind,
                                              const PredictorConfig& config = {});

}  // namespace linkbench
