#include "tweetpool/community.hpp"

#include <cassert>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "tweetpool/rng.hpp"

namespace tweetpool {

namespace {

constexpr double kPhaseGainEps = 1e-10;

// Index-based view of a WeightedGraph used by the optimization loops.
struct IdxGraph {
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> adj;
    std::vector<double> self;    // A_uu = 2 * self[u]
    std::vector<double> degree;  // k_u
    double two_m = 0.0;          // sum of degrees

    static IdxGraph from(const WeightedGraph& g) {
        IdxGraph idx;
        idx.n = g.node_count();
        idx.adj.resize(idx.n);
        idx.self.resize(idx.n);
        idx.degree.resize(idx.n);
        for (int u = 0; u < idx.n; ++u) {
            idx.self[u] = g.self_weight(u);
            for (const auto& [v, w] : g.neighbors(u)) {
                idx.adj[u].emplace_back(v, w);
            }
            idx.degree[u] = g.weighted_degree(u);
            idx.two_m += idx.degree[u];
        }
        return idx;
    }
};

std::vector<int> partition_to_indices(const WeightedGraph& g, const Partition& p) {
    std::vector<int> comm(g.node_count());
    for (int u = 0; u < g.node_count(); ++u) {
        auto it = p.community_of.find(g.nodes()[u]);
        if (it == p.community_of.end()) {
            throw std::invalid_argument("node " + g.nodes()[u] + " missing from partition");
        }
        comm[u] = it->second;
    }
    return comm;
}

Partition indices_to_partition(const WeightedGraph& g, const std::vector<int>& comm) {
    // Renumber densely in node order.
    Partition p;
    std::vector<int> relabel(comm.size(), -1);
    std::map<int, int> dense;
    for (int u = 0; u < g.node_count(); ++u) {
        auto [it, inserted] = dense.emplace(comm[u], p.count);
        if (inserted) {
            ++p.count;
        }
        p.community_of.emplace(g.nodes()[u], it->second);
    }
    (void)relabel;
    return p;
}

double modularity_indices(const IdxGraph& g, const std::vector<int>& comm,
                          double resolution) {
    if (g.two_m <= 0.0) {
        return 0.0;
    }
    const int c_max = comm.empty() ? 0 : *std::max_element(comm.begin(), comm.end()) + 1;
    std::vector<double> in(c_max, 0.0), tot(c_max, 0.0);
    for (int u = 0; u < g.n; ++u) {
        tot[comm[u]] += g.degree[u];
        in[comm[u]] += 2.0 * g.self[u];
        for (const auto& [v, w] : g.adj[u]) {
            if (comm[v] == comm[u]) {
                in[comm[u]] += w;  // each intra edge counted from both ends
            }
        }
    }
    double q = 0.0;
    for (int c = 0; c < c_max; ++c) {
        q += in[c] / g.two_m - resolution * (tot[c] / g.two_m) * (tot[c] / g.two_m);
    }
    return q;
}

// One full local-move phase on index representation. Returns true if any
// node moved. `comm` is updated in place (ids stay within 0..n-1 range).
bool local_move_indices(const IdxGraph& g, std::vector<int>& comm, double resolution,
                        Rng& rng) {
    if (g.n == 0 || g.two_m <= 0.0) {
        return false;
    }
    std::vector<double> comm_tot(g.n, 0.0);
    for (int u = 0; u < g.n; ++u) {
        comm_tot[comm[u]] += g.degree[u];
    }
    std::vector<int> order(g.n);
    std::iota(order.begin(), order.end(), 0);

    bool any_move = false;
    while (true) {
        rng.shuffle(order);
        int moves = 0;
        double pass_gain = 0.0;
        for (int u : order) {
            const int old_c = comm[u];
            comm_tot[old_c] -= g.degree[u];

            // Weight from u to each candidate community (neighbors + old).
            std::map<int, double> w_to;
            w_to[old_c] += 0.0;
            for (const auto& [v, w] : g.adj[u]) {
                w_to[comm[v]] += w;
            }
            int best_c = old_c;
            double best_gain = -std::numeric_limits<double>::infinity();
            for (const auto& [c, w] : w_to) {
                const double gain =
                    w - resolution * comm_tot[c] * g.degree[u] / g.two_m;
                if (gain > best_gain + kPhaseGainEps ||
                    (std::abs(gain - best_gain) <= kPhaseGainEps && c < best_c)) {
                    best_gain = gain;
                    best_c = c;
                }
            }
            const double stay_gain =
                w_to[old_c] - resolution * comm_tot[old_c] * g.degree[u] / g.two_m;
            if (best_c != old_c && best_gain > stay_gain + kPhaseGainEps) {
                comm[u] = best_c;
                ++moves;
                pass_gain += 2.0 * (best_gain - stay_gain) / g.two_m;
            }
            comm_tot[comm[u]] += g.degree[u];
        }
        if (moves == 0 || pass_gain < kPhaseGainEps) {
            any_move = any_move || moves > 0;
            break;
        }
        any_move = true;
    }
    return any_move;
}

std::vector<int> renumber_dense(const std::vector<int>& comm) {
    std::map<int, int> dense;
    std::vector<int> out(comm.size());
    int next = 0;
    for (std::size_t u = 0; u < comm.size(); ++u) {
        auto [it, inserted] = dense.emplace(comm[u], next);
        if (inserted) {
            ++next;
        }
        out[u] = it->second;
    }
    return out;
}

}  // namespace

double modularity(const WeightedGraph& graph, const Partition& partition,
                  double resolution) {
    const IdxGraph idx = IdxGraph::from(graph);
    const std::vector<int> comm = partition_to_indices(graph, partition);
    return modularity_indices(idx, comm, resolution);
}

std::pair<Partition, bool> local_move_phase(const WeightedGraph& graph,
                                            const Partition& partition,
                                            double resolution, std::uint64_t seed) {
    const IdxGraph idx = IdxGraph::from(graph);
    std::vector<int> comm = partition_to_indices(graph, partition);
    Rng rng(splitmix64(seed));
    const double q_before = modularity_indices(idx, comm, resolution);
    const bool improved = local_move_indices(idx, comm, resolution, rng);
    const double q_after = modularity_indices(idx, comm, resolution);
    assert(q_after + 1e-9 >= q_before);
    (void)q_before;
    (void)q_after;
    return {indices_to_partition(graph, renumber_dense(comm)), improved};
}

WeightedGraph aggregate_graph(const WeightedGraph& graph, const Partition& partition) {
    const std::vector<int> comm = partition_to_indices(graph, partition);
    const int c_max = comm.empty() ? 0 : *std::max_element(comm.begin(), comm.end()) + 1;
    WeightedGraph agg;
    for (int c = 0; c < c_max; ++c) {
        agg.add_node(std::to_string(c));
    }
    std::vector<double> self(c_max, 0.0);
    for (int u = 0; u < graph.node_count(); ++u) {
        self[comm[u]] += graph.self_weight(u);
        for (const auto& [v, w] : graph.neighbors(u)) {
            if (u < v) {
                if (comm[u] == comm[v]) {
                    self[comm[u]] += w;
                } else {
                    agg.add_edge(std::to_string(comm[u]), std::to_string(comm[v]), w);
                }
            }
        }
    }
    for (int c = 0; c < c_max; ++c) {
        if (self[c] > 0.0) {
            agg.add_self_weight(std::to_string(c), self[c]);
        }
    }
    return agg;
}

namespace {

LouvainResult louvain_single(const WeightedGraph& graph, double resolution,
                             std::uint64_t seed) {
    LouvainResult result;
    if (graph.node_count() == 0) {
        return result;
    }
    Rng rng(splitmix64(seed));

    // node -> community at the finest level, refined as levels aggregate
    std::vector<int> flat(graph.node_count());
    std::iota(flat.begin(), flat.end(), 0);

    WeightedGraph level = graph;
    IdxGraph idx = IdxGraph::from(level);
    double last_q = -std::numeric_limits<double>::infinity();

    while (true) {
        std::vector<int> comm(idx.n);
        std::iota(comm.begin(), comm.end(), 0);
        const bool improved = local_move_indices(idx, comm, resolution, rng);
        comm = renumber_dense(comm);
        const double q = modularity_indices(idx, comm, resolution);
        if (!result.phase_modularity.empty()) {
            assert(q + 1e-9 >= result.phase_modularity.back());
        }
        result.phase_modularity.push_back(q);
        for (int& c : flat) {
            c = comm[c];
        }
        const int communities = comm.empty() ? 0 : *std::max_element(comm.begin(), comm.end()) + 1;
        if (!improved || communities == idx.n || q <= last_q + kPhaseGainEps) {
            break;
        }
        last_q = q;
        Partition level_partition;
        level_partition.count = communities;
        for (int u = 0; u < idx.n; ++u) {
            level_partition.community_of.emplace(level.nodes()[u], comm[u]);
        }
        level = aggregate_graph(level, level_partition);
        idx = IdxGraph::from(level);
    }

    result.partition = indices_to_partition(graph, renumber_dense(flat));
    result.modularity = modularity(graph, result.partition, resolution);
    return result;
}

}  // namespace

LouvainResult louvain(const WeightedGraph& graph, double resolution,
                      std::uint64_t seed, int restarts) {
    if (restarts < 1) {
        throw std::invalid_argument("louvain: restarts must be >= 1");
    }
    // A single run visits nodes in one shuffled order and can settle on a
    // slightly sub-optimal plateau; restarts rerun the greedy pass from
    // derived sub-seeds and keep the best partition found.
    LouvainResult best = louvain_single(graph, resolution, seed);
    for (int r = 1; r < restarts; ++r) {
        LouvainResult candidate = louvain_single(
            graph, resolution, derive_seed(seed, "restart:" + std::to_string(r)));
        if (candidate.modularity > best.modularity) {
            best = std::move(candidate);
        }
    }
    return best;
}

void save_partition(const Partition& partition, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    for (const auto& [node, c] : partition.community_of) {
        out << node << ' ' << c << '\n';
    }
}

}  // namespace tweetpool
