#include "linkbench/predictors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "linkbench/community.hpp"
#include "linkbench/features.hpp"
#include "linkbench/local_indices.hpp"
#include "linkbench/linalg.hpp"
#include "linkbench/metrics.hpp"

namespace linkbench {

namespace {

constexpr std::array<std::pair<PredictorKind, const char*>, kPredictorCount> kNames = {{
    {PredictorKind::AdamicAdar, "adamic-adar"},
    {PredictorKind::Jaccard, "jaccard"},
    {PredictorKind::PreferentialAttachment, "preferential-attachment"},
    {PredictorKind::N2vDot, "n2v-dot"},
    {PredictorKind::N2vEdge, "n2v-edge"},
    {PredictorKind::Spectral, "spectral"},
    {PredictorKind::Modularity, "modularity"},
    {PredictorKind::MdlDcsbm, "mdl-dcsbm"},
    {PredictorKind::TopStacking, "top-stacking"},
}};

}  // namespace

const char* predictor_name(PredictorKind kind) {
    for (const auto& [k, name] : kNames)
        if (k == kind) return name;
    throw DataError("unknown predictor kind");
}

PredictorKind predictor_from_name(const std::string& name) {
    for (const auto& [k, n] : kNames)
        if (name == n) return k;
    throw DataError("unknown predictor name: " + name);
}

std::vector<PredictorKind> all_predictors() {
    std::vector<PredictorKind> out;
    for (const auto& [k, name] : kNames) out.push_back(k);
    return out;
}

bool LabeledPairs::has_both_classes() const {
    bool pos = false, neg = false;
    for (int l : labels) (l == 1 ? pos : neg) = true;
    return pos && neg;
}

namespace {

void require_fitted(const void* p, const char* what) {
    if (p == nullptr) throw NumericError(std::string(what) + ": model not fitted");
}

// ---------------------------------------------------------------------------

class ClosedFormPredictor final : public LinkPredictor {
public:
    explicit ClosedFormPredictor(PredictorKind kind) : kind_(kind) {}
    PredictorKind kind() const override { return kind_; }

    void fit_graph(const Graph& g, std::uint64_t) override { g_ = &g; }
    void fit_pairs(const LabeledPairs&, const LabeledPairs&, std::uint64_t) override {}

    double score(NodePair p) const override {
        require_fitted(g_, "closed-form predictor");
        switch (kind_) {
            case PredictorKind::AdamicAdar:
                return score_adamic_adar(*g_, p.u, p.v);
            case PredictorKind::Jaccard:
                return score_jaccard(*g_, p.u, p.v);
            case PredictorKind::PreferentialAttachment:
                return score_preferential_attachment(*g_, p.u, p.v);
            default:
                throw NumericError("unexpected closed-form kind");
        }
    }

private:
    PredictorKind kind_;
    const Graph* g_ = nullptr;
};

// ---------------------------------------------------------------------------

class N2vDotPredictor final : public LinkPredictor {
public:
    explicit N2vDotPredictor(EmbeddingOptions opts) : opts_(opts) {}
    PredictorKind kind() const override { return PredictorKind::N2vDot; }

    void fit_graph(const Graph& g, std::uint64_t seed) override {
        embedding_.emplace(train_node_embedding(g, opts_, seed));
    }
    void fit_pairs(const LabeledPairs&, const LabeledPairs&, std::uint64_t) override {}

    double score(NodePair p) const override {
        if (!embedding_) throw NumericError("n2v-dot: model not fitted");
        return embedding_->dot(p.u, p.v);
    }

private:
    EmbeddingOptions opts_;
    std::optional<NodeEmbedding> embedding_;
};

// ---------------------------------------------------------------------------

// Hadamard edge features with a logistic head; the node representation is
// supplied by the subclass (skip-gram embedding or spectral coordinates).
class EdgeClassifierPredictor : public LinkPredictor {
public:
    void fit_pairs(const LabeledPairs& train, const LabeledPairs&, std::uint64_t seed) override {
        if (!train.has_both_classes())
            throw NumericError("edge classifier: training set needs both classes");
        std::vector<std::vector<double>> features;
        features.reserve(train.size());
        for (NodePair p : train.pairs) features.push_back(edge_feature(p));
        head_.emplace(logistic_options());
        head_->fit(features, train.labels, seed);
    }

    double score(NodePair p) const override {
        if (!head_) throw NumericError("edge classifier: head not fitted");
        return head_->predict(edge_feature(p));
    }

protected:
    virtual std::vector<double> edge_feature(NodePair p) const = 0;
    virtual LogisticRegression::Options logistic_options() const = 0;

private:
    std::optional<LogisticRegression> head_;
};

class N2vEdgePredictor final : public EdgeClassifierPredictor {
public:
    N2vEdgePredictor(EmbeddingOptions eopts, LogisticRegression::Options lopts)
        : eopts_(eopts), lopts_(lopts) {}
    PredictorKind kind() const override { return PredictorKind::N2vEdge; }

    void fit_graph(const Graph& g, std::uint64_t seed) override {
        embedding_.emplace(train_node_embedding(g, eopts_, seed));
    }

protected:
    std::vector<double> edge_feature(NodePair p) const override {
        if (!embedding_) throw NumericError("n2v-edge: embedding not fitted");
        return embedding_->hadamard(p.u, p.v);
    }
    LogisticRegression::Options logistic_options() const override { return lopts_; }

private:
    EmbeddingOptions eopts_;
    LogisticRegression::Options lopts_;
    std::optional<NodeEmbedding> embedding_;
};

class SpectralPredictor final : public EdgeClassifierPredictor {
public:
    SpectralPredictor(std::size_t dims, LogisticRegression::Options lopts)
        : dims_(dims), lopts_(lopts) {}
    PredictorKind kind() const override { return PredictorKind::Spectral; }

    void fit_graph(const Graph& g, std::uint64_t seed) override {
        const std::size_t n = g.node_count();
        const std::size_t k = std::min(dims_, static_cast<std::size_t>(n));
        std::vector<double> inv_sqrt_deg(n, 0.0);
        for (NodeId v = 0; v < n; ++v)
            if (g.degree(v) > 0)
                inv_sqrt_deg[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
        // shift by +I so the target eigenvalues dominate in magnitude; the
        // normalized adjacency spectrum lives in [-1, 1] and the shift keeps
        // the eigenvectors unchanged
        MatVec apply = [&g, &inv_sqrt_deg, n](const double* x, double* y) {
            for (std::size_t v = 0; v < n; ++v) {
                double acc = x[v];
                for (NodeId w : g.neighbors(static_cast<NodeId>(v)))
                    acc += inv_sqrt_deg[v] * inv_sqrt_deg[w] * x[w];
                y[v] = acc;
            }
        };
        const EigenPairs pairs = top_eigenpairs(apply, n, k, 1e-8, 5000, seed);
        rep_.assign(n * k, 0.0);
        dims_fitted_ = k;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t v = 0; v < n; ++v) rep_[v * k + i] = pairs.vectors[i][v];
    }

protected:
    std::vector<double> edge_feature(NodePair p) const override {
        if (rep_.empty()) throw NumericError("spectral: basis not fitted");
        std::vector<double> f(dims_fitted_);
        for (std::size_t i = 0; i < dims_fitted_; ++i)
            f[i] = rep_[p.u * dims_fitted_ + i] * rep_[p.v * dims_fitted_ + i];
        return f;
    }
    LogisticRegression::Options logistic_options() const override { return lopts_; }

private:
    std::size_t dims_;
    std::size_t dims_fitted_ = 0;
    LogisticRegression::Options lopts_;
    std::vector<double> rep_;  // node_count x dims_fitted_, row-major
};

// ---------------------------------------------------------------------------

class ModularityPredictor final : public LinkPredictor {
public:
    PredictorKind kind() const override { return PredictorKind::Modularity; }

    void fit_graph(const Graph& g, std::uint64_t seed) override {
        if (g.edge_count() == 0) throw NumericError("modularity: graph has no edges");
        densities_.emplace(g, modularity_partition(g, seed));
    }
    void fit_pairs(const LabeledPairs&, const LabeledPairs&, std::uint64_t) override {}

    double score(NodePair p) const override {
        if (!densities_) throw NumericError("modularity: model not fitted");
        const auto& part = densities_->partition();
        return densities_->density(part.block_of[p.u], part.block_of[p.v]);
    }

private:
    std::optional<BlockDensities> densities_;
};

class DcsbmPredictor final : public LinkPredictor {
public:
    explicit DcsbmPredictor(int restarts) : restarts_(restarts) {}
    PredictorKind kind() const override { return PredictorKind::MdlDcsbm; }

    void fit_graph(const Graph& g, std::uint64_t seed) override {
        if (g.edge_count() == 0) throw NumericError("mdl-dcsbm: graph has no edges");
        g_ = &g;
        fit_ = fit_mdl_dcsbm(g, seed, restarts_);
    }
    void fit_pairs(const LabeledPairs&, const LabeledPairs&, std::uint64_t) override {}

    double score(NodePair p) const override {
        require_fitted(g_, "mdl-dcsbm");
        const int r = fit_.partition.block_of[p.u];
        const int s = fit_.partition.block_of[p.v];
        const double er = fit_.block_degree[r], es = fit_.block_degree[s];
        if (er == 0.0 || es == 0.0) return 0.0;
        const double ers = fit_.block_pair[r][s];
        return static_cast<double>(g_->degree(p.u)) * static_cast<double>(g_->degree(p.v)) *
               ers / (er * es);
    }

private:
    int restarts_;
    const Graph* g_ = nullptr;
    DcsbmFit fit_;
};

// ---------------------------------------------------------------------------

class StackingPredictor final : public LinkPredictor {
public:
    explicit StackingPredictor(ForestOptions opts) : opts_(opts) {}
    PredictorKind kind() const override { return PredictorKind::TopStacking; }

    void fit_graph(const Graph& g, std::uint64_t seed) override {
        extractor_.emplace(g, seed);
    }

    void fit_pairs(const LabeledPairs& train, const LabeledPairs& val,
                   std::uint64_t seed) override {
        if (!extractor_) throw NumericError("top-stacking: features not fitted");
        if (!train.has_both_classes())
            throw NumericError("top-stacking: training set needs both classes");
        std::vector<std::vector<double>> features;
        features.reserve(train.size());
        for (NodePair p : train.pairs) features.push_back(extractor_->extract(p));
        forest_.emplace(opts_);
        forest_->fit(features, train.labels, seed);

        // validation picks the forest size
        if (!val.pairs.empty() && val.has_both_classes() && opts_.size_grid.size() > 1) {
            std::vector<std::vector<double>> vfeat;
            vfeat.reserve(val.size());
            for (NodePair p : val.pairs) vfeat.push_back(extractor_->extract(p));
            double best_auc = -1.0;
            std::size_t best_size = opts_.trees;
            for (std::size_t size : opts_.size_grid) {
                forest_->use_trees(size);
                std::vector<double> scores;
                scores.reserve(val.size());
                for (const auto& f : vfeat) scores.push_back(forest_->predict(f));
                const double auc = compute_auc(scores, val.labels);
                if (auc > best_auc + 1e-12) {
                    best_auc = auc;
                    best_size = size;
                }
            }
            forest_->use_trees(best_size);
        }
    }

    double score(NodePair p) const override {
        if (!forest_) throw NumericError("top-stacking: forest not fitted");
        return forest_->predict(extractor_->extract(p));
    }

private:
    ForestOptions opts_;
    std::optional<FeatureExtractor> extractor_;
    std::optional<RandomForest> forest_;
};

}  // namespace

std::unique_ptr<LinkPredictor> make_predictor(PredictorKind kind, const PredictorConfig& config) {
    switch (kind) {
        case PredictorKind::AdamicAdar:
        case PredictorKind::Jaccard:
        case PredictorKind::PreferentialAttachment:
            return std::make_unique<ClosedFormPredictor>(kind);
        case PredictorKind::N2vDot:
            return std::make_unique<N2vDotPredictor>(config.embedding);
        case PredictorKind::N2vEdge:
            return std::make_unique<N2vEdgePredictor>(config.embedding, config.logistic);
        case PredictorKind::Spectral:
            return std::make_unique<SpectralPredictor>(config.spectral_dims, config.logistic);
        case PredictorKind::Modularity:
            return std::make_unique<ModularityPredictor>();
        case PredictorKind::MdlDcsbm:
            return std::make_unique<DcsbmPredictor>(config.dcsbm_restarts);
        case PredictorKind::TopStacking:
            return std::make_unique<StackingPredictor>(config.forest);
    }
    throw DataError("unknown predictor kind");
}

}  // namespace linkbench
