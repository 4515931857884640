#include "linkbench/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <unordered_map>

namespace linkbench {

namespace {

struct KindInfo {
    SamplerKind kind;
    const char* name;
    SamplerCategory category;
};

constexpr std::array<KindInfo, 20> kKinds{{
    {SamplerKind::RandomEdge, "random-edge", SamplerCategory::EdgeBased},
    {SamplerKind::RandomNodeEdge, "random-node-edge", SamplerCategory::EdgeBased},
    {SamplerKind::HybridNodeEdge, "hybrid-node-edge", SamplerCategory::EdgeBased},
    {SamplerKind::RandomEdgeInduction, "random-edge-induction", SamplerCategory::EdgeBased},
    {SamplerKind::RandomNode, "random-node", SamplerCategory::NodeBased},
    {SamplerKind::DegreeNode, "degree-node", SamplerCategory::NodeBased},
    {SamplerKind::PageRankNode, "pagerank-node", SamplerCategory::NodeBased},
    {SamplerKind::DepthFirstSearch, "depth-first-search", SamplerCategory::Dfs},
    {SamplerKind::Diffusion, "diffusion", SamplerCategory::NeighborBased},
    {SamplerKind::ForestFire, "forest-fire", SamplerCategory::NeighborBased},
    {SamplerKind::NonBacktrackingWalk, "non-backtracking-random-walk",
     SamplerCategory::NeighborBased},
    {SamplerKind::RandomWalk, "random-walk", SamplerCategory::NeighborBased},
    {SamplerKind::RandomWalkRestart, "random-walk-with-restart", SamplerCategory::NeighborBased},
    {SamplerKind::MetropolisHastingsWalk, "metropolis-hastings-random-walk",
     SamplerCategory::NeighborBased},
    {SamplerKind::CirculatedNeighborsWalk, "circulated-neighbors-random-walk",
     SamplerCategory::NeighborBased},
    {SamplerKind::BreadthFirstSearch, "breadth-first-search", SamplerCategory::NeighborBased},
    {SamplerKind::RandomWalkJump, "random-walk-with-jump", SamplerCategory::NodeJump},
    {SamplerKind::RandomNodeNeighbor, "random-node-neighbor", SamplerCategory::NodeJump},
    {SamplerKind::ShortestPathSampler, "shortest-path", SamplerCategory::NodeJump},
    {SamplerKind::LoopErasedWalk, "loop-erased-random-walk", SamplerCategory::NodeJump},
}};

const KindInfo& info(SamplerKind kind) {
    for (const auto& k : kKinds)
        if (k.kind == kind) return k;
    throw DataError("unknown sampler kind");
}

// Node set grown one node at a time, tracking the induced edge count.
struct Growth {
    const Graph& g;
    std::vector<char> in;
    std::vector<NodeId> touched;
    std::size_t induced = 0;

    explicit Growth(const Graph& graph) : g(graph), in(graph.node_count(), 0) {}

    bool has(NodeId v) const { return in[v] != 0; }

    bool add(NodeId v) {
        if (in[v]) return false;
        in[v] = 1;
        touched.push_back(v);
        for (NodeId w : g.neighbors(v))
            if (in[w]) ++induced;
        return true;
    }
};

EdgeSet collect_induced(const Graph& g, const Growth& grow) {
    return induced_edges(g, grow.touched);
}

void check_probability(double p, const char* name) {
    if (!(p > 0.0 && p < 1.0))
        throw DataError(std::string("sampler parameter ") + name + " must lie in (0,1)");
}

// Uniformly remove edges down to the target size.
EdgeSet trim_uniform(const EdgeSet& retained, std::size_t target, Rng& rng) {
    std::vector<NodePair> edges = retained.sorted();
    rng.shuffle(edges);
    EdgeSet out;
    for (std::size_t i = 0; i < target; ++i) out.insert(edges[i]);
    return out;
}

bool still_connected_without(const std::vector<NodePair>& edges, NodePair skip) {
    std::unordered_map<NodeId, std::vector<NodeId>> adj;
    for (const NodePair& e : edges) {
        if (e == skip) continue;
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    if (!adj.count(skip.u)) return false;
    std::deque<NodeId> q{skip.u};
    std::unordered_set<NodeId> seen{skip.u};
    while (!q.empty()) {
        NodeId x = q.front();
        q.pop_front();
        if (x == skip.v) return true;
        for (NodeId w : adj[x])
            if (seen.insert(w).second) q.push_back(w);
    }
    return false;
}

// Remove random non-bridge edges until the target size is reached, keeping
// the sampled subgraph connected. Feasible whenever target >= |touched| - 1.
EdgeSet trim_connected(const EdgeSet& retained, std::size_t target, Rng& rng) {
    std::vector<NodePair> edges = retained.sorted();
    rng.shuffle(edges);
    while (edges.size() > target) {
        bool removed = false;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (still_connected_without(edges, edges[i])) {
                edges.erase(edges.begin() + i);
                removed = true;
                break;
            }
        }
        if (!removed)
            throw InfeasibleSample("connected trim: only bridges left above target");
        rng.shuffle(edges);
    }
    EdgeSet out;
    for (const NodePair& e : edges) out.insert(e);
    return out;
}

std::uint64_t max_steps(const Graph& g) {
    return 10000ull * (g.node_count() + g.edge_count()) + 1000000ull;
}

[[noreturn]] void stalled(SamplerKind kind) {
    throw InfeasibleSample("sampler '" + sampler_name(kind) + "' exceeded its step budget");
}

// ---------------------------------------------------------------- edge-based

void sample_random_edge(const Graph& g, std::size_t target, Rng& rng, EdgeSet& retained) {
    std::vector<NodePair> edges = g.edges();
    rng.shuffle(edges);
    for (std::size_t i = 0; i < target; ++i) retained.insert(edges[i]);
}

// One draw of the node-then-incident-edge scheme; false if the chosen node is
// isolated.
bool node_edge_round(const Graph& g, Rng& rng, EdgeSet& retained) {
    NodeId v = static_cast<NodeId>(rng.below(g.node_count()));
    const auto nbrs = g.neighbors(v);
    if (nbrs.empty()) return false;
    NodeId w = nbrs[rng.below(nbrs.size())];
    retained.insert(NodePair(v, w));
    return true;
}

void sample_random_node_edge(const Graph& g, std::size_t target, Rng& rng, EdgeSet& retained,
                             SamplerKind kind) {
    std::uint64_t budget = max_steps(g);
    while (retained.size() < target) {
        if (budget-- == 0) stalled(kind);
        node_edge_round(g, rng, retained);
    }
}

void sample_hybrid(const Graph& g, const SamplerParams& params, std::size_t target, Rng& rng,
                   EdgeSet& retained) {
    const auto& edges = g.edges();
    std::uint64_t budget = max_steps(g);
    while (retained.size() < target) {
        if (budget-- == 0) stalled(SamplerKind::HybridNodeEdge);
        if (rng.chance(params.hybrid_mix))
            retained.insert(edges[rng.below(edges.size())]);
        else
            node_edge_round(g, rng, retained);
    }
}

SampleOutcome sample_induction(const Graph& g, const SamplerParams& params, std::size_t target,
                               Rng& rng) {
    Growth grow(g);
    std::vector<NodePair> order = g.edges();
    rng.shuffle(order);
    std::uint64_t budget = 10000;
    // Keep flipping per-edge coins until the sampled node set induces enough
    // edges, then draw the final edges uniformly from that induced pool.
    while (grow.induced < target) {
        if (budget-- == 0) stalled(SamplerKind::RandomEdgeInduction);
        for (const NodePair& e : order) {
            if (rng.chance(params.induction_keep)) {
                grow.add(e.u);
                grow.add(e.v);
            }
            if (grow.induced >= target) break;
        }
    }
    SampleOutcome out;
    out.retained = trim_uniform(collect_induced(g, grow), target, rng);
    out.touched = grow.touched;
    return out;
}

// ---------------------------------------------------------------- node-based

SampleOutcome sample_node_based(const Graph& g, SamplerKind kind, std::size_t target, Rng& rng) {
    Growth grow(g);
    const NodeId n = g.node_count();

    std::vector<double> weights;
    if (kind == SamplerKind::PageRankNode) weights = pagerank(g);

    std::uint64_t budget = max_steps(g);
    while (grow.induced < target) {
        if (budget-- == 0) stalled(kind);
        NodeId v;
        switch (kind) {
            case SamplerKind::RandomNode:
                v = static_cast<NodeId>(rng.below(n));
                break;
            case SamplerKind::DegreeNode: {
                // degree-proportional: uniform edge endpoint
                const NodePair& e = g.edges()[rng.below(g.edge_count())];
                v = rng.chance(0.5) ? e.u : e.v;
                break;
            }
            case SamplerKind::PageRankNode:
                v = static_cast<NodeId>(rng.weighted(weights));
                break;
            default:
                throw DataError("not a node-based sampler");
        }
        grow.add(v);
    }
    SampleOutcome out;
    out.retained = trim_uniform(collect_induced(g, grow), target, rng);
    out.touched = grow.touched;
    return out;
}

// ----------------------------------------------------------------------- dfs

SampleOutcome sample_dfs(const Graph& g, std::size_t target, Rng& rng) {
    Growth grow(g);
    const NodeId n = g.node_count();
    std::vector<NodeId> stack;

    auto restart = [&]() {
        std::vector<NodeId> unvisited;
        for (NodeId v = 0; v < n; ++v)
            if (!grow.has(v)) unvisited.push_back(v);
        stack.push_back(unvisited[rng.below(unvisited.size())]);
    };

    restart();
    while (grow.induced < target) {
        if (stack.empty()) {
            restart();
            continue;
        }
        NodeId v = stack.back();
        stack.pop_back();
        if (!grow.add(v)) continue;
        std::vector<NodeId> nbrs(g.neighbors(v).begin(), g.neighbors(v).end());
        rng.shuffle(nbrs);
        for (NodeId w : nbrs)
            if (!grow.has(w)) stack.push_back(w);
    }
    SampleOutcome out;
    out.retained = trim_uniform(collect_induced(g, grow), target, rng);
    out.touched = grow.touched;
    return out;
}

// ------------------------------------------------------------ neighbor-based

NodeId neighbor_start(const Graph& g, std::size_t target, Rng& rng, SamplerKind kind) {
    NodeId start = static_cast<NodeId>(rng.below(g.node_count()));
    Components comps = connected_components(g);
    std::vector<std::size_t> comp_edges(comps.count, 0);
    for (const NodePair& e : g.edges()) ++comp_edges[comps.component_of[e.u]];
    if (comp_edges[comps.component_of[start]] < target)
        throw InfeasibleSample("sampler '" + sampler_name(kind) +
                               "': start component holds fewer edges than the target");
    return start;
}

SampleOutcome finish_connected(const Graph& g, Growth& grow, std::size_t target, Rng& rng) {
    SampleOutcome out;
    out.retained = trim_connected(collect_induced(g, grow), target, rng);
    out.touched = grow.touched;
    return out;
}

SampleOutcome sample_bfs(const Graph& g, std::size_t target, Rng& rng) {
    NodeId start = neighbor_start(g, target, rng, SamplerKind::BreadthFirstSearch);
    Growth grow(g);
    std::deque<NodeId> queue{start};
    while (grow.induced < target) {
        NodeId v = queue.front();
        queue.pop_front();
        if (!grow.add(v)) continue;
        std::vector<NodeId> nbrs(g.neighbors(v).begin(), g.neighbors(v).end());
        rng.shuffle(nbrs);
        for (NodeId w : nbrs)
            if (!grow.has(w)) queue.push_back(w);
    }
    return finish_connected(g, grow, target, rng);
}

SampleOutcome sample_diffusion(const Graph& g, std::size_t target, Rng& rng) {
    NodeId start = neighbor_start(g, target, rng, SamplerKind::Diffusion);
    Growth grow(g);
    grow.add(start);
    std::vector<std::pair<NodeId, NodeId>> frontier;
    while (grow.induced < target) {
        frontier.clear();
        for (NodeId u : grow.touched)
            for (NodeId w : g.neighbors(u))
                if (!grow.has(w)) frontier.emplace_back(u, w);
        grow.add(frontier[rng.below(frontier.size())].second);
    }
    return finish_connected(g, grow, target, rng);
}

SampleOutcome sample_forest_fire(const Graph& g, const SamplerParams& params, std::size_t target,
                                 Rng& rng) {
    NodeId start = neighbor_start(g, target, rng, SamplerKind::ForestFire);
    Growth grow(g);
    grow.add(start);
    std::deque<NodeId> burning{start};
    std::uint64_t budget = max_steps(g);
    while (grow.induced < target) {
        if (budget-- == 0) stalled(SamplerKind::ForestFire);
        if (burning.empty()) {
            // re-ignite from an already burned node so the sample stays connected
            burning.push_back(grow.touched[rng.below(grow.touched.size())]);
        }
        NodeId v = burning.front();
        burning.pop_front();
        std::vector<NodeId> unvisited;
        for (NodeId w : g.neighbors(v))
            if (!grow.has(w)) unvisited.push_back(w);
        if (unvisited.empty()) continue;
        // geometric burn count with mean 1/(1-p), support >= 1
        std::size_t burn = 1;
        while (rng.chance(params.burn_prob)) ++burn;
        rng.shuffle(unvisited);
        for (std::size_t i = 0; i < std::min(burn, unvisited.size()); ++i) {
            if (grow.add(unvisited[i])) burning.push_back(unvisited[i]);
            if (grow.induced >= target) break;
        }
    }
    return finish_connected(g, grow, target, rng);
}

SampleOutcome sample_walker(const Graph& g, SamplerKind kind, const SamplerParams& params,
                            std::size_t target, Rng& rng) {
    NodeId start = neighbor_start(g, target, rng, kind);
    Growth grow(g);
    grow.add(start);
    NodeId cur = start;
    NodeId prev = start;
    // per-node shuffled neighbor queues for the circulated-neighbors variant
    std::unordered_map<NodeId, std::vector<NodeId>> circ;

    std::uint64_t budget = max_steps(g);
    while (grow.induced < target) {
        if (budget-- == 0) stalled(kind);
        const auto nbrs = g.neighbors(cur);
        if (nbrs.empty()) stalled(kind);  // isolated start cannot reach any target > 0
        NodeId next = cur;
        switch (kind) {
            case SamplerKind::RandomWalk:
                next = nbrs[rng.below(nbrs.size())];
                break;
            case SamplerKind::NonBacktrackingWalk: {
                if (nbrs.size() == 1) {
                    next = nbrs[0];
                } else {
                    do {
                        next = nbrs[rng.below(nbrs.size())];
                    } while (next == prev);
                }
                break;
            }
            case SamplerKind::RandomWalkRestart:
                next = rng.chance(params.restart_prob) ? start : nbrs[rng.below(nbrs.size())];
                break;
            case SamplerKind::MetropolisHastingsWalk: {
                NodeId proposal = nbrs[rng.below(nbrs.size())];
                double ratio = std::pow(static_cast<double>(g.degree(cur)) /
                                            static_cast<double>(g.degree(proposal)),
                                        params.mh_exponent);
                next = rng.chance(std::min(1.0, ratio)) ? proposal : cur;
                break;
            }
            case SamplerKind::CirculatedNeighborsWalk: {
                auto& queue = circ[cur];
                if (queue.empty()) {
                    queue.assign(nbrs.begin(), nbrs.end());
                    rng.shuffle(queue);
                }
                next = queue.back();
                queue.pop_back();
                break;
            }
            default:
                throw DataError("not a walker sampler");
        }
        prev = cur;
        cur = next;
        grow.add(cur);
    }
    return finish_connected(g, grow, target, rng);
}

// ------------------------------------------------------------ node-jump-based

SampleOutcome sample_walk_with_jump(const Graph& g, const SamplerParams& params,
                                    std::size_t target, Rng& rng) {
    Growth grow(g);
    NodeId cur = static_cast<NodeId>(rng.below(g.node_count()));
    grow.add(cur);
    std::uint64_t budget = max_steps(g);
    while (grow.induced < target) {
        if (budget-- == 0) stalled(SamplerKind::RandomWalkJump);
        const auto nbrs = g.neighbors(cur);
        if (nbrs.empty() || rng.chance(params.jump_prob))
            cur = static_cast<NodeId>(rng.below(g.node_count()));
        else
            cur = nbrs[rng.below(nbrs.size())];
        grow.add(cur);
    }
    SampleOutcome out;
    out.retained = trim_uniform(collect_induced(g, grow), target, rng);
    out.touched = grow.touched;
    return out;
}

SampleOutcome sample_node_neighbor(const Graph& g, std::size_t target, Rng& rng) {
    Growth grow(g);
    std::uint64_t budget = max_steps(g);
    while (grow.induced < target) {
        if (budget-- == 0) stalled(SamplerKind::RandomNodeNeighbor);
        NodeId v = static_cast<NodeId>(rng.below(g.node_count()));
        grow.add(v);
        for (NodeId w : g.neighbors(v)) {
            grow.add(w);
            if (grow.induced >= target) break;
        }
    }
    SampleOutcome out;
    out.retained = trim_uniform(collect_induced(g, grow), target, rng);
    out.touched = grow.touched;
    return out;
}

SampleOutcome sample_shortest_path(const Graph& g, std::size_t target, Rng& rng) {
    Growth grow(g);
    EdgeSet path_edges;
    const NodeId n = g.node_count();
    std::uint64_t budget = max_steps(g);
    while (path_edges.size() < target) {
        if (budget-- == 0) stalled(SamplerKind::ShortestPathSampler);
        if (n < 2) stalled(SamplerKind::ShortestPathSampler);
        NodeId u = static_cast<NodeId>(rng.below(n));
        NodeId v = static_cast<NodeId>(rng.below(n - 1));
        if (v >= u) ++v;
        auto path = shortest_path(g, u, v, rng.next());
        if (!path) continue;
        for (std::size_t i = 0; i < path->size(); ++i) {
            grow.add((*path)[i]);
            if (i + 1 < path->size()) path_edges.insert(NodePair((*path)[i], (*path)[i + 1]));
        }
    }
    SampleOutcome out;
    out.retained = trim_uniform(path_edges, target, rng);
    out.touched = grow.touched;
    return out;
}

SampleOutcome sample_loop_erased(const Graph& g, std::size_t target, Rng& rng) {
    Components comps = connected_components(g);
    const std::size_t forest_size = g.node_count() - comps.count;
    if (target > forest_size)
        throw InfeasibleSample("loop-erased-random-walk: target " + std::to_string(target) +
                               " exceeds spanning forest size " + std::to_string(forest_size));

    Growth grow(g);
    EdgeSet tree;
    std::vector<std::size_t> comp_size(comps.count, 0), comp_visited(comps.count, 0);
    for (NodeId v = 0; v < g.node_count(); ++v) ++comp_size[comps.component_of[v]];

    auto visit = [&](NodeId v) {
        if (grow.add(v)) ++comp_visited[comps.component_of[v]];
    };
    auto jump_unvisited = [&]() {
        std::vector<NodeId> unvisited;
        for (NodeId v = 0; v < g.node_count(); ++v)
            if (!grow.has(v)) unvisited.push_back(v);
        NodeId v = unvisited[rng.below(unvisited.size())];
        visit(v);
        return v;
    };

    NodeId cur = static_cast<NodeId>(rng.below(g.node_count()));
    visit(cur);
    std::uint64_t budget = max_steps(g);
    while (tree.size() < target) {
        if (budget-- == 0) stalled(SamplerKind::LoopErasedWalk);
        const NodeId comp = comps.component_of[cur];
        if (comp_visited[comp] == comp_size[comp]) {
            // current component spanned; continue the forest elsewhere
            cur = jump_unvisited();
            continue;
        }
        const auto nbrs = g.neighbors(cur);
        NodeId next = nbrs[rng.below(nbrs.size())];
        if (!grow.has(next)) {
            visit(next);
            tree.insert(NodePair(cur, next));
        }
        cur = next;
    }
    SampleOutcome out;
    out.retained = std::move(tree);
    out.touched = grow.touched;
    return out;
}

}  // namespace

void SamplerParams::validate() const {
    check_probability(hybrid_mix, "hybrid_mix");
    check_probability(induction_keep, "induction_keep");
    check_probability(burn_prob, "burn_prob");
    check_probability(restart_prob, "restart_prob");
    check_probability(jump_prob, "jump_prob");
    if (!(mh_exponent > 0.0)) throw DataError("sampler parameter mh_exponent must be positive");
}

const std::vector<SamplerKind>& all_samplers() {
    static const std::vector<SamplerKind> kinds = [] {
        std::vector<SamplerKind> v;
        for (const auto& k : kKinds) v.push_back(k.kind);
        return v;
    }();
    return kinds;
}

std::string sampler_name(SamplerKind kind) { return info(kind).name; }
SamplerCategory sampler_category(SamplerKind kind) { return info(kind).category; }

std::string category_name(SamplerCategory cat) {
    switch (cat) {
        case SamplerCategory::EdgeBased: return "edge-based";
        case SamplerCategory::NodeBased: return "node-based";
        case SamplerCategory::Dfs: return "dfs";
        case SamplerCategory::NeighborBased: return "neighbor-based";
        case SamplerCategory::NodeJump: return "node-jump-based";
    }
    throw DataError("unknown sampler category");
}

std::optional<SamplerKind> sampler_from_name(const std::string& name) {
    for (const auto& k : kKinds)
        if (name == k.name) return k.kind;
    return std::nullopt;
}

std::size_t retention_target(std::size_t edge_count, double rho) {
    return static_cast<std::size_t>(std::llround(rho * static_cast<double>(edge_count)));
}

SampleOutcome draw_sample(const Graph& g, const SamplerSpec& spec, double rho,
                          std::uint64_t seed) {
    if (!(rho > 0.0 && rho <= 1.0)) throw DataError("retention fraction must lie in (0,1]");
    spec.params.validate();
    const std::size_t target = retention_target(g.edge_count(), rho);
    Rng rng(seed);

    SampleOutcome out;
    if (target == 0) {
        // nothing to retain; keep the outcome well-formed
    } else {
        switch (spec.kind) {
            case SamplerKind::RandomEdge:
                sample_random_edge(g, target, rng, out.retained);
                break;
            case SamplerKind::RandomNodeEdge:
                sample_random_node_edge(g, target, rng, out.retained, spec.kind);
                break;
            case SamplerKind::HybridNodeEdge:
                sample_hybrid(g, spec.params, target, rng, out.retained);
                break;
            case SamplerKind::RandomEdgeInduction:
                out = sample_induction(g, spec.params, target, rng);
                break;
            case SamplerKind::RandomNode:
            case SamplerKind::DegreeNode:
            case SamplerKind::PageRankNode:
                out = sample_node_based(g, spec.kind, target, rng);
                break;
            case SamplerKind::DepthFirstSearch:
                out = sample_dfs(g, target, rng);
                break;
            case SamplerKind::BreadthFirstSearch:
                out = sample_bfs(g, target, rng);
                break;
            case SamplerKind::Diffusion:
                out = sample_diffusion(g, target, rng);
                break;
            case SamplerKind::ForestFire:
                out = sample_forest_fire(g, spec.params, target, rng);
                break;
            case SamplerKind::RandomWalk:
            case SamplerKind::NonBacktrackingWalk:
            case SamplerKind::RandomWalkRestart:
            case SamplerKind::MetropolisHastingsWalk:
            case SamplerKind::CirculatedNeighborsWalk:
                out = sample_walker(g, spec.kind, spec.params, target, rng);
                break;
            case SamplerKind::RandomWalkJump:
                out = sample_walk_with_jump(g, spec.params, target, rng);
                break;
            case SamplerKind::RandomNodeNeighbor:
                out = sample_node_neighbor(g, target, rng);
                break;
            case SamplerKind::ShortestPathSampler:
                out = sample_shortest_path(g, target, rng);
                break;
            case SamplerKind::LoopErasedWalk:
                out = sample_loop_erased(g, target, rng);
                break;
        }
    }

    // edge-based variants report endpoints of retained edges as touched nodes
    if (out.touched.empty() && !out.retained.empty()) {
        std::vector<char> seen(g.node_count(), 0);
        for (const NodePair& e : out.retained.sorted()) {
            if (!seen[e.u]) {
                seen[e.u] = 1;
                out.touched.push_back(e.u);
            }
            if (!seen[e.v]) {
                seen[e.v] = 1;
                out.touched.push_back(e.v);
            }
        }
    }
    out.spec = spec;
    out.seed = seed;
    out.achieved_retention =
        static_cast<double>(out.retained.size()) / static_cast<double>(g.edge_count());
    return out;
}

}  // namespace linkbench
