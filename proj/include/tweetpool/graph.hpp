#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tweetpool/corpus.hpp"

namespace tweetpool {

// Undirected weighted graph over user ids. Self-weights are tracked
// separately from proper edges (they appear when communities are folded
// into single nodes) and count twice toward the weighted degree.
class WeightedGraph {
public:
    int add_node(const std::string& id);  // idempotent, returns node index
    void add_edge(const std::string& u, const std::string& v, double weight);
    void add_self_weight(const std::string& u, double weight);

    int node_count() const { return static_cast<int>(nodes_.size()); }
    const std::vector<std::string>& nodes() const { return nodes_; }
    std::optional<int> index_of(const std::string& id) const;

    const std::map<int, double>& neighbors(int node) const { return adj_.at(node); }
    double self_weight(int node) const { return self_.at(node); }
    double edge_weight(const std::string& u, const std::string& v) const;

    // k_u: sum of incident edge weights, self-weight counted twice.
    double weighted_degree(int node) const;
    // m: sum of all edge weights plus all self-weights.
    double total_weight() const;
    std::size_t edge_count() const { return edge_count_; }

    // One line per edge: "u v w", endpoints in node-index order.
    void save_edge_list(const std::filesystem::path& path) const;

private:
    std::vector<std::string> nodes_;
    std::map<std::string, int> index_;
    std::vector<std::map<int, double>> adj_;
    std::vector<double> self_;
    std::size_t edge_count_ = 0;
};

// Node -> dense community id. Used both for detected communities and for
// reply/mention user groups.
struct Partition {
    std::map<std::string, int> community_of;
    int count = 0;
};

struct RetweetGraph {
    WeightedGraph graph;
    int skipped_references = 0;  // retweet_of ids not present in the corpus
    int self_retweets = 0;
};

// Nodes are all authors; each in-corpus retweet adds weight 1 between the
// retweeter and the original author.
RetweetGraph build_retweet_graph(const Corpus& corpus);

struct ConversationForest {
    std::set<std::string> roots;
    std::map<std::string, std::string> parent;  // child tweet id -> parent tweet id
    int broken_cycles = 0;

    std::string root_of(const std::string& id) const;
};

// Follows reply_to links transitively; replies to tweets outside the corpus
// become roots. Malformed cycles are broken at the closing edge.
ConversationForest build_conversation_forest(const Corpus& corpus);

// Groups users that interact around original tweets: the author, its
// mentions, authors of direct replies and their mentions form one seed set;
// overlapping seed sets merge transitively. Everyone else is a singleton.
Partition build_reply_mention_groups(const Corpus& corpus);

}  // namespace tweetpool
