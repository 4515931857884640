#pragma once

#include <cstdint>
#include <vector>

#include "linkbench/graph.hpp"

namespace linkbench {

struct Partition {
    std::vector<int> block_of;  // per-node block label, dense 0..block_count-1
    int block_count = 0;
};

double modularity(const Graph& g, const Partition& p);

/// Greedy agglomerative modularity maximization (merge while the best merge
/// improves Q).
Partition modularity_partition(const Graph& g, std::uint64_t seed);

/// Pairwise block densities: observed edges between blocks r,s over possible
/// pairs. Symmetric in (r,s).
class BlockDensities {
public:
    BlockDensities(const Graph& g, const Partition& p);
    double density(int r, int s) const;
    const Partition& partition() const { return partition_; }

private:
    Partition partition_;
    std::vector<double> dens_;  // block_count x block_count
};

struct DcsbmFit {
    Partition partition;
    double description_length = 0.0;
    std::vector<double> dl_trace;  // DL after every accepted optimizer move
    // half-edge block counts for scoring
    std::vector<double> block_degree;                 // e_r
    std::vector<std::vector<double>> block_pair;      // e_rs (e_rr counts twice the intra edges)
};

/// Description length of a block assignment under the degree-corrected
/// blockmodel: microcanonical entropy plus uniform partition/block-count
/// priors.
double dcsbm_description_length(const Graph& g, const std::vector<int>& block_of);

/// Greedy agglomeration from one block per node with interleaved single-node
/// move sweeps; every accepted move lowers the description length. Best of
/// `restarts` runs.
DcsbmFit fit_mdl_dcsbm(const Graph& g, std::uint64_t seed, int restarts = 3);

/// Local (per-node) clustering coefficient.
double clustering_coefficient(const Graph& g, NodeId v);

}  // namespace linkbench
