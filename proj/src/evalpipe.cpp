#include "linkbench/evalpipe.hpp"

#include <algorithm>
#include <unordered_set>

#include "linkbench/metrics.hpp"
#include "linkbench/rng.hpp"

namespace linkbench {

namespace {

// Deduplicated uniform sample of non-edges, capped at `cap`. Small pair
// universes are enumerated exactly; larger ones use rejection sampling.
std::vector<NodePair> uniform_non_edges(const Graph& g, std::size_t cap, Rng& rng) {
    const std::uint64_t n = g.node_count();
    const std::uint64_t total = n * (n - 1) / 2;
    const std::uint64_t non_edges = total - g.edge_count();
    if (non_edges == 0) throw DataError("graph has no non-edges");
    const std::size_t want = static_cast<std::size_t>(
        std::min<std::uint64_t>(cap, non_edges));

    std::vector<NodePair> pool;
    if (total <= 2'000'000) {
        pool.reserve(static_cast<std::size_t>(non_edges));
        for (NodeId u = 0; u + 1 < n; ++u)
            for (NodeId v = u + 1; v < n; ++v)
                if (!g.has_edge(u, v)) pool.push_back(NodePair(u, v));
        if (pool.size() > want) {
            rng.shuffle(pool);
            pool.resize(want);
        }
    } else {
        std::unordered_set<std::uint64_t> seen;
        const std::uint64_t budget = 64ULL * want + 1024;
        std::uint64_t attempts = 0;
        while (pool.size() < want) {
            if (++attempts > budget)
                throw NumericError("non-edge sampling stalled (graph too dense)");
            const NodeId u = static_cast<NodeId>(rng.below(n));
            const NodeId v = static_cast<NodeId>(rng.below(n));
            if (u == v || g.has_edge(u, v)) continue;
            const NodePair p(u, v);
            if (seen.insert(p.key()).second) pool.push_back(p);
        }
    }
    std::sort(pool.begin(), pool.end());
    return pool;
}

// Non-edges of g with both endpoints in `touched`, capped at `cap`.
std::vector<NodePair> induced_non_edges(const Graph& g, const std::vector<NodeId>& touched,
                                        std::size_t cap, Rng& rng) {
    const std::uint64_t t = touched.size();
    std::vector<NodePair> pool;
    if (t < 2) return pool;
    const std::uint64_t total = t * (t - 1) / 2;
    if (total <= 4'000'000) {
        for (std::size_t i = 0; i + 1 < touched.size(); ++i)
            for (std::size_t j = i + 1; j < touched.size(); ++j)
                if (!g.has_edge(touched[i], touched[j]))
                    pool.push_back(NodePair(touched[i], touched[j]));
        if (pool.size() > cap) {
            rng.shuffle(pool);
            pool.resize(cap);
        }
    } else {
        std::unordered_set<std::uint64_t> seen;
        const std::uint64_t budget = 64ULL * cap + 1024;
        std::uint64_t attempts = 0;
        while (pool.size() < cap) {
            if (++attempts > budget) break;  // dense induced structure; keep what we have
            const NodeId u = touched[rng.below(t)];
            const NodeId v = touched[rng.below(t)];
            if (u == v || g.has_edge(u, v)) continue;
            const NodePair p(u, v);
            if (seen.insert(p.key()).second) pool.push_back(p);
        }
    }
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::vector<NodePair> fold_slice(const std::vector<NodePair>& shuffled, int fold, int folds,
                                 bool take_fold) {
    std::vector<NodePair> out;
    for (std::size_t i = 0; i < shuffled.size(); ++i) {
        const bool in_fold = static_cast<int>(i % folds) == fold;
        if (in_fold == take_fold) out.push_back(shuffled[i]);
    }
    return out;
}

void draw_with_replacement(const std::vector<NodePair>& pool, std::size_t size, int label,
                           Rng& rng, BalancedSet& out) {
    for (std::size_t i = 0; i < size; ++i) {
        out.pairs.push_back(pool[rng.below(pool.size())]);
        out.labels.push_back(label);
    }
}

}  // namespace

NegativePools build_negative_pool(const Graph& g, const SamplerSpec& spec, double rho,
                                  std::uint64_t seed, std::size_t pool_cap) {
    Rng rng(seed);
    NegativePools pools;
    if (sampler_category(spec.kind) == SamplerCategory::EdgeBased) {
        // run the missingness function directly on a sampled complement
        const std::vector<NodePair> pool = uniform_non_edges(g, pool_cap, rng);
        const Graph complement(g.node_count(), pool);
        const SampleOutcome out = draw_sample(complement, spec, rho, rng.next());
        for (const NodePair& p : pool)
            (out.retained.contains(p) ? pools.observed : pools.heldout).push_back(p);
    } else {
        // the node process runs on g; non-edges induced by its touched nodes
        // play the role of the sampled negatives
        const SampleOutcome out = draw_sample(g, spec, rho, rng.next());
        std::unordered_set<NodeId> touched(out.touched.begin(), out.touched.end());
        pools.observed = induced_non_edges(g, out.touched, pool_cap, rng);
        for (const NodePair& p : uniform_non_edges(g, pool_cap, rng))
            if (!touched.count(p.u) || !touched.count(p.v)) pools.heldout.push_back(p);
    }
    return pools;
}

SplitPlan make_split(const Graph& g, const SampleOutcome& outcome, const NegativePools& pools,
                     int repeat, int fold, int folds, std::uint64_t seed) {
    if (folds < 2) throw DataError("make_split: need at least 2 folds");
    if (fold < 0 || fold >= folds) throw DataError("make_split: fold index out of range");
    if (outcome.retained.size() < static_cast<std::size_t>(folds))
        throw DataError("make_split: too few retained edges to fold");

    SplitPlan plan;
    plan.repeat = repeat;
    plan.fold = fold;
    plan.seed = seed;

    std::vector<NodePair> positives = outcome.retained.sorted();
    std::vector<NodePair> negatives = pools.observed;
    Rng rng(seed);
    rng.shuffle(positives);
    rng.shuffle(negatives);

    plan.e_val = fold_slice(positives, fold, folds, true);
    plan.e_tr = fold_slice(positives, fold, folds, false);
    plan.neg_val = fold_slice(negatives, fold, folds, true);
    plan.neg_tr = fold_slice(negatives, fold, folds, false);
    plan.neg_test = pools.heldout;
    for (const NodePair& e : g.edges())
        if (!outcome.retained.contains(e)) plan.y.push_back(e);
    return plan;
}

void validate_split(const Graph& g, const SampleOutcome& outcome, const SplitPlan& plan) {
    auto fail = [](const char* what) { throw DataError(std::string("split invariant: ") + what); };

    std::unordered_set<std::uint64_t> observed;
    for (const NodePair& p : plan.e_tr) observed.insert(p.key());
    for (const NodePair& p : plan.e_val)
        if (!observed.insert(p.key()).second) fail("E_tr and E_val overlap");
    if (observed.size() != outcome.retained.size()) fail("E_tr u E_val != E'");
    for (const NodePair& p : plan.e_tr)
        if (!outcome.retained.contains(p) || !g.has_edge(p)) fail("E_tr outside E'");
    for (const NodePair& p : plan.e_val)
        if (!outcome.retained.contains(p) || !g.has_edge(p)) fail("E_val outside E'");
    for (const NodePair& p : plan.y) {
        if (!g.has_edge(p)) fail("Y contains a non-edge");
        if (observed.count(p.key())) fail("Y intersects E'");
    }
    std::unordered_set<std::uint64_t> neg;
    for (const NodePair& p : plan.neg_tr) neg.insert(p.key());
    for (const NodePair& p : plan.neg_val)
        if (!neg.insert(p.key()).second) fail("negative train/val overlap");
    for (const auto* pool : {&plan.neg_tr, &plan.neg_val, &plan.neg_test})
        for (const NodePair& p : *pool)
            if (g.has_edge(p)) fail("negative pool contains a true edge");
}

BalancedSet balance_resample(const SplitPlan& plan, SplitPart part, std::size_t size,
                             std::uint64_t seed) {
    const std::vector<NodePair>* pos = nullptr;
    const std::vector<NodePair>* neg = nullptr;
    const char* name = "";
    switch (part) {
        case SplitPart::Train: pos = &plan.e_tr; neg = &plan.neg_tr; name = "train"; break;
        case SplitPart::Val: pos = &plan.e_val; neg = &plan.neg_val; name = "validation"; break;
        case SplitPart::Test: pos = &plan.y; neg = &plan.neg_test; name = "test"; break;
    }
    if (pos->empty())
        throw DataError(std::string("balance_resample: empty positive ") + name + " pool");
    if (neg->empty())
        throw DataError(std::string("balance_resample: empty negative ") + name + " pool");

    Rng rng(seed);
    BalancedSet out;
    out.pairs.reserve(2 * size);
    out.labels.reserve(2 * size);
    draw_with_replacement(*pos, size, 1, rng, out);
    draw_with_replacement(*neg, size, 0, rng, out);
    return out;
}

std::vector<AucRecord> run_cell(const Graph& g, const std::string& network,
                                const std::string& domain, SamplerKind sampler,
                                PredictorKind predictor, const EvalOptions& opts,
                                std::uint64_t master_seed) {
    const std::string sampler_str = sampler_name(sampler);
    const std::string predictor_str = predictor_name(predictor);
    SamplerSpec spec{sampler, opts.sampler_params};
    spec.params.validate();

    std::vector<AucRecord> records;
    records.reserve(static_cast<std::size_t>(opts.repeats) * opts.folds);

    auto base_record = [&](int repeat, int fold, std::uint64_t seed) {
        AucRecord r;
        r.network = network;
        r.domain = domain;
        r.sampler = sampler_str;
        r.predictor = predictor_str;
        r.repeat = repeat;
        r.fold = fold;
        r.n = g.node_count();
        r.m = g.edge_count();
        r.seed = seed;
        return r;
    };

    for (int repeat = 0; repeat < opts.repeats; ++repeat) {
        // fold index `folds` is reserved for repeat-level randomness
        const std::uint64_t repeat_seed = derive_seed(master_seed, network, sampler_str,
                                                      predictor_str, repeat, opts.folds);
        Rng sub(repeat_seed);
        const std::uint64_t sample_seed = sub.next();
        const std::uint64_t pool_seed = sub.next();
        const std::uint64_t graph_seed = sub.next();
        const std::uint64_t shuffle_seed = sub.next();

        std::optional<SampleOutcome> outcome;
        std::optional<NegativePools> pools;
        std::optional<Graph> observed;
        std::unique_ptr<LinkPredictor> model;
        std::string repeat_failure;
        if (!opts.redraw_per_fold) {
            try {
                outcome = draw_sample(g, spec, opts.rho, sample_seed);
                pools = build_negative_pool(g, spec, opts.rho, pool_seed, opts.pool_cap);
                observed.emplace(g.node_count(), outcome->retained.sorted());
                model = make_predictor(predictor, opts.predictor);
                model->fit_graph(*observed, graph_seed);
            } catch (const std::exception& e) {
                repeat_failure = e.what();
            }
        }

        for (int fold = 0; fold < opts.folds; ++fold) {
            const std::uint64_t fold_seed = derive_seed(master_seed, network, sampler_str,
                                                        predictor_str, repeat, fold);
            AucRecord rec = base_record(repeat, fold, fold_seed);
            try {
                std::uint64_t plan_seed = shuffle_seed;
                if (opts.redraw_per_fold) {
                    Rng fsub(fold_seed);
                    outcome = draw_sample(g, spec, opts.rho, fsub.next());
                    pools = build_negative_pool(g, spec, opts.rho, fsub.next(), opts.pool_cap);
                    observed.emplace(g.node_count(), outcome->retained.sorted());
                    model = make_predictor(predictor, opts.predictor);
                    model->fit_graph(*observed, fsub.next());
                    plan_seed = fsub.next();
                } else if (model == nullptr) {
                    throw InfeasibleSample(repeat_failure);
                }

                const SplitPlan plan =
                    make_split(g, *outcome, *pools, repeat, fold, opts.folds, plan_seed);
#ifndef NDEBUG
                validate_split(g, *outcome, plan);
#endif
                Rng draw(fold_seed);
                const BalancedSet train =
                    balance_resample(plan, SplitPart::Train, opts.balanced_size, draw.next());
                const BalancedSet val =
                    balance_resample(plan, SplitPart::Val, opts.balanced_size, draw.next());
                model->fit_pairs({train.pairs, train.labels}, {val.pairs, val.labels},
                                 draw.next());
                const BalancedSet test =
                    balance_resample(plan, SplitPart::Test, opts.balanced_size, draw.next());
                std::vector<double> scores;
                scores.reserve(test.pairs.size());
                for (const NodePair& p : test.pairs) scores.push_back(model->score(p));
                rec.auc = compute_auc(scores, test.labels);
            } catch (const std::exception& e) {
                rec.status = e.what();
            }
            records.push_back(std::move(rec));
        }
    }
    return records;
}

}  // namespace linkbench
