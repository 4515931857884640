#include "linkbench/community.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "linkbench/rng.hpp"

namespace linkbench {

namespace {

constexpr double kEps = 1e-9;

double lgamma_int(double k) { return std::lgamma(k + 1.0); }  // ln k!

// ----------------------------------------------------------------- modularity

struct MergeState {
    std::vector<char> active;
    std::vector<int> block_of;
    std::vector<double> intra;   // E_rr, edge counts
    std::vector<double> degsum;  // a_r
    std::vector<std::unordered_map<int, double>> between;  // E_rs, s != r
    double m;

    explicit MergeState(const Graph& g)
        : active(g.node_count(), 1),
          block_of(g.node_count()),
          intra(g.node_count(), 0.0),
          degsum(g.node_count(), 0.0),
          between(g.node_count()),
          m(static_cast<double>(g.edge_count())) {
        std::iota(block_of.begin(), block_of.end(), 0);
        for (NodeId v = 0; v < g.node_count(); ++v)
            degsum[v] = static_cast<double>(g.degree(v));
        for (const NodePair& e : g.edges()) {
            between[e.u][e.v] += 1.0;
            between[e.v][e.u] += 1.0;
        }
    }

    double merge_gain(int r, int s) const {
        auto it = between[r].find(s);
        const double ers = it == between[r].end() ? 0.0 : it->second;
        return ers / m - degsum[r] * degsum[s] / (2.0 * m * m);
    }

    void merge(int r, int s) {  // s into r
        intra[r] += intra[s];
        auto it = between[r].find(s);
        if (it != between[r].end()) {
            intra[r] += it->second;
            between[r].erase(it);
        }
        between[s].erase(r);
        for (const auto& [x, w] : between[s]) {
            between[r][x] += w;
            between[x].erase(s);
            between[x][r] += w;
        }
        between[s].clear();
        degsum[r] += degsum[s];
        active[s] = 0;
        for (int& b : block_of)
            if (b == s) b = r;
    }
};

// --------------------------------------------------------------------- dcsbm

double entropy_h(double x) {
    if (x <= 0.0) return 0.0;
    return (1.0 + x) * std::log(1.0 + x) - x * std::log(x);
}

double model_bits(double m, double n, double blocks) {
    return m * entropy_h(blocks * (blocks + 1.0) / (2.0 * m)) + n * std::log(blocks);
}

double pair_term(double ers, double er, double es) {
    if (ers <= 0.0) return 0.0;
    return ers * std::log(ers / (er * es));
}

struct DcsbmState {
    const Graph& g;
    std::vector<int> block_of;
    std::vector<int> size;
    std::vector<double> er;                                // half-edge counts per block
    std::vector<std::unordered_map<int, double>> ers;      // symmetric, diagonal = 2x intra
    int blocks = 0;
    double m;
    double degree_const;  // -m - sum_v ln(deg v)!

    explicit DcsbmState(const Graph& graph) : g(graph), m(static_cast<double>(graph.edge_count())) {
        const NodeId n = g.node_count();
        block_of.resize(n);
        std::iota(block_of.begin(), block_of.end(), 0);
        size.assign(n, 1);
        er.assign(n, 0.0);
        ers.assign(n, {});
        blocks = static_cast<int>(n);
        degree_const = -m;
        for (NodeId v = 0; v < n; ++v) {
            er[v] = static_cast<double>(g.degree(v));
            degree_const -= lgamma_int(static_cast<double>(g.degree(v)));
        }
        for (const NodePair& e : g.edges()) add_pair(e.u, e.v, 1.0);
    }

    void add_pair(int r, int s, double w) {
        if (r == s) {
            ers[r][r] += 2.0 * w;
        } else {
            ers[r][s] += w;
            ers[s][r] += w;
        }
    }

    // -(1/2) sum over ordered pairs of e_rs ln(e_rs/(e_r e_s))
    double edge_entropy() const {
        double total = 0.0;
        for (std::size_t r = 0; r < ers.size(); ++r)
            for (const auto& [s, w] : ers[r]) total += pair_term(w, er[r], er[s]);
        return -0.5 * total;
    }

    double full_dl() const {
        return degree_const + edge_entropy() +
               model_bits(m, static_cast<double>(g.node_count()), static_cast<double>(blocks));
    }

    // contribution of all pairs touching r or s (unordered), for local deltas
    double local(int r, int s) const {
        double total = 0.0;
        for (int x : {r, s}) {
            for (const auto& [y, w] : ers[x]) {
                if (y == x)
                    total += 0.5 * pair_term(w, er[x], er[x]);
                else if ((y == r || y == s) && y < x)
                    continue;  // counted from the other row
                else
                    total += pair_term(w, er[x], er[y]);
            }
            if (s == r) break;
        }
        return -total;
    }

    double merge_delta(int r, int s) const {
        const double before = local(r, s);
        const double et = er[r] + er[s];
        double after = 0.0;
        std::unordered_map<int, double> row;
        for (int x : {r, s})
            for (const auto& [y, w] : ers[x]) row[(y == r || y == s) ? -1 : y] += w;
        for (const auto& [y, w] : row) {
            if (y == -1)
                after -= 0.5 * pair_term(w, et, et);
            else
                after -= pair_term(w, et, er[y]);
        }
        const double n = static_cast<double>(g.node_count());
        const double dmodel = model_bits(m, n, blocks - 1.0) - model_bits(m, n, blocks);
        return after - before + dmodel;
    }

    void merge(int r, int s) {  // s into r
        std::unordered_map<int, double> srow = ers[s];
        for (const auto& [y, w] : srow) {
            if (y == s) {
                ers[r][r] += w;
            } else if (y == r) {
                ers[r][r] += 2.0 * w;
                ers[r].erase(s);
            } else {
                ers[r][y] += w;
                ers[y].erase(s);
                ers[y][r] += w;
            }
        }
        ers[s].clear();
        er[r] += er[s];
        er[s] = 0.0;
        size[r] += size[s];
        size[s] = 0;
        for (auto& b : block_of)
            if (b == s) b = r;
        --blocks;
    }

    // edge counts from node v into each block
    std::unordered_map<int, double> node_counts(NodeId v) const {
        std::unordered_map<int, double> c;
        for (NodeId w : g.neighbors(v)) c[block_of[w]] += 1.0;
        return c;
    }

    double move_delta(NodeId v, int s, const std::unordered_map<int, double>& c) const {
        const int r = block_of[v];
        if (r == s) return 0.0;
        const double kv = static_cast<double>(g.degree(v));
        const double before = local(r, s);
        const double er_new = er[r] - kv;
        const double es_new = er[s] + kv;
        auto cnt = [&](int x) {
            auto it = c.find(x);
            return it == c.end() ? 0.0 : it->second;
        };
        auto get = [&](int x, int y) {
            auto it = ers[x].find(y);
            return it == ers[x].end() ? 0.0 : it->second;
        };
        double after = 0.0;
        // diagonal terms
        after -= 0.5 * pair_term(get(r, r) - 2.0 * cnt(r), er_new, er_new);
        after -= 0.5 * pair_term(get(s, s) + 2.0 * cnt(s), es_new, es_new);
        // cross term
        after -= pair_term(get(r, s) + cnt(r) - cnt(s), er_new, es_new);
        // other rows
        std::unordered_set<int> seen{r, s};
        for (int x : {r, s}) {
            for (const auto& [y, w] : ers[x]) {
                if (seen.count(y)) continue;
                const double nw = x == r ? w - cnt(y) : w + cnt(y);
                after -= pair_term(nw, x == r ? er_new : es_new, er[y]);
            }
        }
        // blocks v connects to that row s had no prior edges with
        for (const auto& [y, w] : c) {
            if (seen.count(y)) continue;
            if (!ers[s].count(y)) after -= pair_term(w, es_new, er[y]);
        }
        double dmodel = 0.0;
        if (size[r] == 1) {
            const double n = static_cast<double>(g.node_count());
            dmodel = model_bits(m, n, blocks - 1.0) - model_bits(m, n, blocks);
        }
        return after - before + dmodel;
    }

    void move(NodeId v, int s, const std::unordered_map<int, double>& c) {
        const int r = block_of[v];
        const double kv = static_cast<double>(g.degree(v));
        for (const auto& [y, w] : c) {
            if (y == r) {
                ers[r][r] -= 2.0 * w;
                add_pair(r, s, w);
            } else if (y == s) {
                ers[s][s] += 2.0 * w;
                ers[r][s] -= w;
                ers[s][r] -= w;
            } else {
                ers[r][y] -= w;
                ers[y][r] -= w;
                ers[s][y] += w;
                ers[y][s] += w;
            }
        }
        // drop zeroed entries so row scans stay tight
        for (int x : {r, s})
            for (auto it = ers[x].begin(); it != ers[x].end();) {
                if (std::fabs(it->second) < 1e-12) {
                    const int y = it->first;
                    it = ers[x].erase(it);
                    if (y != x) ers[y].erase(x);
                } else {
                    ++it;
                }
            }
        er[r] -= kv;
        er[s] += kv;
        --size[r];
        ++size[s];
        block_of[v] = s;
        if (size[r] == 0) --blocks;
    }
};

Partition dense_partition(const std::vector<int>& raw) {
    Partition p;
    p.block_of.resize(raw.size());
    std::unordered_map<int, int> remap;
    for (std::size_t v = 0; v < raw.size(); ++v) {
        auto [it, fresh] = remap.emplace(raw[v], static_cast<int>(remap.size()));
        p.block_of[v] = it->second;
    }
    p.block_count = static_cast<int>(remap.size());
    return p;
}

}  // namespace

double modularity(const Graph& g, const Partition& p) {
    const double m = static_cast<double>(g.edge_count());
    if (m == 0.0) return 0.0;
    std::vector<double> intra(p.block_count, 0.0), degsum(p.block_count, 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v)
        degsum[p.block_of[v]] += static_cast<double>(g.degree(v));
    for (const NodePair& e : g.edges())
        if (p.block_of[e.u] == p.block_of[e.v]) intra[p.block_of[e.u]] += 1.0;
    double q = 0.0;
    for (int r = 0; r < p.block_count; ++r) {
        const double frac = degsum[r] / (2.0 * m);
        q += intra[r] / m - frac * frac;
    }
    return q;
}

Partition modularity_partition(const Graph& g, std::uint64_t seed) {
    if (g.edge_count() == 0) throw DataError("modularity: graph has no edges");
    MergeState state(g);
    (void)seed;  // greedy scan is deterministic; ties break toward lowest block pair
    for (;;) {
        double best = kEps;
        int best_r = -1, best_s = -1;
        for (std::size_t r = 0; r < state.between.size(); ++r) {
            if (!state.active[r]) continue;
            for (const auto& [s, w] : state.between[r]) {
                if (static_cast<int>(r) >= s) continue;
                const double gain = state.merge_gain(static_cast<int>(r), s);
                if (gain > best) {
                    best = gain;
                    best_r = static_cast<int>(r);
                    best_s = s;
                }
            }
        }
        if (best_r < 0) break;
        state.merge(best_r, best_s);
    }
    return dense_partition(state.block_of);
}

BlockDensities::BlockDensities(const Graph& g, const Partition& p) : partition_(p) {
    const int b = p.block_count;
    std::vector<double> count(static_cast<std::size_t>(b) * b, 0.0);
    std::vector<double> sizes(b, 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v) sizes[p.block_of[v]] += 1.0;
    for (const NodePair& e : g.edges()) {
        const int r = p.block_of[e.u], s = p.block_of[e.v];
        count[r * b + s] += 1.0;
        if (r != s) count[s * b + r] += 1.0;
    }
    dens_.assign(count.size(), 0.0);
    for (int r = 0; r < b; ++r)
        for (int s = 0; s < b; ++s) {
            const double possible =
                r == s ? sizes[r] * (sizes[r] - 1.0) / 2.0 : sizes[r] * sizes[s];
            dens_[r * b + s] = possible > 0.0 ? count[r * b + s] / possible : 0.0;
        }
}

double BlockDensities::density(int r, int s) const {
    return dens_[static_cast<std::size_t>(r) * partition_.block_count + s];
}

double dcsbm_description_length(const Graph& g, const std::vector<int>& block_of) {
    DcsbmState state(g);
    // apply the assignment by merging node-blocks into the labeled blocks
    std::unordered_map<int, int> rep;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        auto [it, fresh] = rep.emplace(block_of[v], static_cast<int>(v));
        if (!fresh) state.merge(it->second, static_cast<int>(v));
    }
    return state.full_dl();
}

DcsbmFit fit_mdl_dcsbm(const Graph& g, std::uint64_t seed, int restarts) {
    if (g.edge_count() == 0) throw DataError("dcsbm: graph has no edges");
    DcsbmFit best;
    best.description_length = std::numeric_limits<double>::infinity();

    for (int run = 0; run < restarts; ++run) {
        Rng rng(SeedHasher().mix(seed).mix(static_cast<std::uint64_t>(run)).value());
        DcsbmState state(g);
        double dl = state.full_dl();
        std::vector<double> trace{dl};

        auto node_sweep = [&]() {
            bool any = false;
            std::vector<NodeId> order(g.node_count());
            std::iota(order.begin(), order.end(), 0);
            rng.shuffle(order);
            for (NodeId v : order) {
                auto counts = state.node_counts(v);
                const int r = state.block_of[v];
                double best_delta = -kEps;
                int best_target = -1;
                for (const auto& [target, w] : counts) {
                    if (target == r) continue;
                    const double d = state.move_delta(v, target, counts);
                    if (d < best_delta) {
                        best_delta = d;
                        best_target = target;
                    }
                }
                if (best_target >= 0) {
                    state.move(v, best_target, counts);
                    dl += best_delta;
                    trace.push_back(dl);
                    any = true;
                }
            }
            return any;
        };

        // group all zero-degree singleton blocks first; only the block-count
        // term of the DL changes
        {
            int first_empty = -1;
            for (std::size_t r = 0; r < state.ers.size(); ++r) {
                if (state.size[r] == 0 || state.er[r] > 0.0) continue;
                if (first_empty < 0) {
                    first_empty = static_cast<int>(r);
                    continue;
                }
                const double d = state.merge_delta(first_empty, static_cast<int>(r));
                state.merge(first_empty, static_cast<int>(r));
                dl += d;
                trace.push_back(dl);
            }
        }

        // agglomerative phase: accept the best improving merge until none helps
        const std::size_t candidates_per_block = 10;
        std::size_t merges_since_sweep = 0;
        for (;;) {
            double best_delta = -kEps;
            int best_r = -1, best_s = -1;
            for (std::size_t r = 0; r < state.ers.size(); ++r) {
                if (state.size[r] == 0 || state.ers[r].empty()) continue;
                std::vector<int> cands;
                for (const auto& [s, w] : state.ers[r])
                    if (s != static_cast<int>(r)) cands.push_back(s);
                if (cands.size() > candidates_per_block) {
                    rng.shuffle(cands);
                    cands.resize(candidates_per_block);
                }
                for (int s : cands) {
                    const double d = state.merge_delta(static_cast<int>(r), s);
                    if (d < best_delta) {
                        best_delta = d;
                        best_r = static_cast<int>(r);
                        best_s = s;
                    }
                }
            }
            if (best_r < 0) break;
            state.merge(best_r, best_s);
            dl += best_delta;
            trace.push_back(dl);
            if (++merges_since_sweep >= std::max<std::size_t>(8, g.node_count() / 10)) {
                merges_since_sweep = 0;
                node_sweep();
            }
        }
        while (node_sweep()) {
        }

        if (dl < best.description_length) {
            best.description_length = dl;
            best.partition = dense_partition(state.block_of);
            best.dl_trace = std::move(trace);
            const int b = best.partition.block_count;
            best.block_degree.assign(b, 0.0);
            best.block_pair.assign(b, std::vector<double>(b, 0.0));
            for (NodeId v = 0; v < g.node_count(); ++v)
                best.block_degree[best.partition.block_of[v]] +=
                    static_cast<double>(g.degree(v));
            for (const NodePair& e : g.edges()) {
                const int r = best.partition.block_of[e.u], s = best.partition.block_of[e.v];
                if (r == s) {
                    best.block_pair[r][r] += 2.0;
                } else {
                    best.block_pair[r][s] += 1.0;
                    best.block_pair[s][r] += 1.0;
                }
            }
        }
    }
    return best;
}

double clustering_coefficient(const Graph& g, NodeId v) {
    const auto nbrs = g.neighbors(v);
    const std::size_t k = nbrs.size();
    if (k < 2) return 0.0;
    std::size_t links = 0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (g.has_edge(nbrs[i], nbrs[j])) ++links;
    return 2.0 * static_cast<double>(links) / (static_cast<double>(k) * (k - 1));
}

}  // namespace linkbench
