#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linkbench/graph.hpp"
#include "linkbench/types.hpp"

namespace linkbench {

enum class SamplerKind {
    // edge-based
    RandomEdge,
    RandomNodeEdge,
    HybridNodeEdge,
    RandomEdgeInduction,
    // node-based
    RandomNode,
    DegreeNode,
    PageRankNode,
    // dfs
    DepthFirstSearch,
    // neighbor-based
    Diffusion,
    ForestFire,
    NonBacktrackingWalk,
    RandomWalk,
    RandomWalkRestart,
    MetropolisHastingsWalk,
    CirculatedNeighborsWalk,
    BreadthFirstSearch,
    // node-jump-based
    RandomWalkJump,
    RandomNodeNeighbor,
    ShortestPathSampler,
    LoopErasedWalk,
};

enum class SamplerCategory { EdgeBased, NodeBased, Dfs, NeighborBased, NodeJump };

struct SamplerParams {
    double hybrid_mix = 0.5;       // share of pure-uniform edge draws in the hybrid sampler
    double induction_keep = 0.5;   // per-edge keep probability of the induction sampler
    double burn_prob = 0.4;        // forest-fire expansion probability
    double restart_prob = 0.1;     // random-walk-with-restart teleport probability
    double jump_prob = 0.1;        // random-walk-with-jump teleport probability
    double mh_exponent = 1.0;      // Metropolis-Hastings rejection exponent

    void validate() const;
};

struct SamplerSpec {
    SamplerKind kind = SamplerKind::RandomEdge;
    SamplerParams params;
};

struct SampleOutcome {
    EdgeSet retained;             // E'
    std::vector<NodeId> touched;  // nodes reached by the procedure, in touch order
    SamplerSpec spec;
    std::uint64_t seed = 0;
    double achieved_retention = 0.0;
};

const std::vector<SamplerKind>& all_samplers();
std::string sampler_name(SamplerKind kind);
SamplerCategory sampler_category(SamplerKind kind);
std::string category_name(SamplerCategory cat);
std::optional<SamplerKind> sampler_from_name(const std::string& name);

/// Edge target for retention fraction rho on m edges.
std::size_t retention_target(std::size_t edge_count, double rho);

/// Run one missingness function. Deterministic in (g, spec, rho, seed); the
/// result always holds exactly round(rho*m) edges, or InfeasibleSample is
/// thrown when the procedure cannot reach that target.
SampleOutcome draw_sample(const Graph& g, const SamplerSpec& spec, double rho,
                          std::uint64_t seed);

}  // namespace linkbench
