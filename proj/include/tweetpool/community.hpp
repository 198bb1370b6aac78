#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tweetpool/graph.hpp"

namespace tweetpool {

// Newman modularity Q of a partition at the given resolution. Self-weights
// contribute to both intra-community weight and degree. Returns 0 on an
// empty graph.
double modularity(const WeightedGraph& graph, const Partition& partition,
                  double resolution = 1.0);

struct LouvainResult {
    Partition partition;
    double modularity = 0.0;
    // Q after each local-move phase, across all levels; non-decreasing.
    std::vector<double> phase_modularity;
};

// Greedy modularity maximization: local node moves alternated with graph
// aggregation until no move improves Q. Deterministic for a fixed seed
// (the seed shuffles node visit order); equal-gain ties go to the lowest
// community id. With restarts > 1 the whole pass is rerun from derived
// sub-seeds and the highest-modularity result is returned.
LouvainResult louvain(const WeightedGraph& graph, double resolution = 1.0,
                      std::uint64_t seed = 0, int restarts = 1);

// One Louvain phase-1 sweep to convergence: repeatedly move single nodes to
// the neighboring community with maximal positive gain. `improved` is true
// iff at least one move happened.
std::pair<Partition, bool> local_move_phase(const WeightedGraph& graph,
                                            const Partition& partition,
                                            double resolution = 1.0,
                                            std::uint64_t seed = 0);

// One node per community (named by its community id); inter-community
// weights summed, intra-community weight folded into self-weights.
WeightedGraph aggregate_graph(const WeightedGraph& graph, const Partition& partition);

// Export as "node community" lines in node order.
void save_partition(const Partition& partition, const std::filesystem::path& path);

}  // namespace tweetpool
