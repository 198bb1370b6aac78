#include "tweetpool/graph.hpp"

#include <fstream>
#include <numeric>
#include <stdexcept>

namespace tweetpool {

int WeightedGraph::add_node(const std::string& id) {
    auto it = index_.find(id);
    if (it != index_.end()) {
        return it->second;
    }
    const int idx = static_cast<int>(nodes_.size());
    nodes_.push_back(id);
    index_.emplace(id, idx);
    adj_.emplace_back();
    self_.push_back(0.0);
    return idx;
}

void WeightedGraph::add_edge(const std::string& u, const std::string& v, double weight) {
    if (u == v) {
        throw std::invalid_argument("self-loop on node " + u +
                                    "; use add_self_weight instead");
    }
    if (!(weight > 0.0)) {
        throw std::invalid_argument("edge weight must be positive");
    }
    const int ui = add_node(u);
    const int vi = add_node(v);
    auto [it, inserted] = adj_[ui].emplace(vi, weight);
    if (!inserted) {
        it->second += weight;
    } else {
        ++edge_count_;
    }
    auto [jt, jinserted] = adj_[vi].emplace(ui, weight);
    if (!jinserted) {
        jt->second += weight;
    }
}

void WeightedGraph::add_self_weight(const std::string& u, double weight) {
    if (weight < 0.0) {
        throw std::invalid_argument("self-weight must be non-negative");
    }
    self_[add_node(u)] += weight;
}

std::optional<int> WeightedGraph::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

double WeightedGraph::edge_weight(const std::string& u, const std::string& v) const {
    auto ui = index_of(u);
    auto vi = index_of(v);
    if (!ui || !vi) {
        return 0.0;
    }
    auto it = adj_[*ui].find(*vi);
    return it == adj_[*ui].end() ? 0.0 : it->second;
}

double WeightedGraph::weighted_degree(int node) const {
    double k = 2.0 * self_.at(node);
    for (const auto& [v, w] : adj_.at(node)) {
        k += w;
    }
    return k;
}

double WeightedGraph::total_weight() const {
    double m = std::accumulate(self_.begin(), self_.end(), 0.0);
    for (int u = 0; u < node_count(); ++u) {
        for (const auto& [v, w] : adj_[u]) {
            if (u < v) {
                m += w;
            }
        }
    }
    return m;
}

void WeightedGraph::save_edge_list(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    for (int u = 0; u < node_count(); ++u) {
        for (const auto& [v, w] : adj_[u]) {
            if (u < v) {
                out << nodes_[u] << ' ' << nodes_[v] << ' ' << w << '\n';
            }
        }
    }
}

RetweetGraph build_retweet_graph(const Corpus& corpus) {
    RetweetGraph result;
    for (const Tweet& t : corpus.tweets()) {
        result.graph.add_node(t.author_id);
    }
    for (const Tweet& t : corpus.tweets()) {
        if (!t.retweet_of) {
            continue;
        }
        if (!corpus.contains(*t.retweet_of)) {
            ++result.skipped_references;
            continue;
        }
        const Tweet& original = corpus.by_id(*t.retweet_of);
        if (original.author_id == t.author_id) {
            ++result.self_retweets;
            continue;
        }
        result.graph.add_edge(t.author_id, original.author_id, 1.0);
    }
    return result;
}

std::string ConversationForest::root_of(const std::string& id) const {
    std::string cur = id;
    auto it = parent.find(cur);
    while (it != parent.end()) {
        cur = it->second;
        it = parent.find(cur);
    }
    return cur;
}

ConversationForest build_conversation_forest(const Corpus& corpus) {
    ConversationForest forest;
    for (const Tweet& t : corpus.tweets()) {
        if (!t.reply_to || !corpus.contains(*t.reply_to)) {
            forest.roots.insert(t.id);
            continue;
        }
        // Reject a parent whose ancestor chain already contains this tweet.
        bool cycle = false;
        std::string cur = *t.reply_to;
        while (true) {
            if (cur == t.id) {
                cycle = true;
                break;
            }
            auto it = forest.parent.find(cur);
            if (it == forest.parent.end()) {
                break;
            }
            cur = it->second;
        }
        if (cycle) {
            ++forest.broken_cycles;
            forest.roots.insert(t.id);
        } else {
            forest.parent.emplace(t.id, *t.reply_to);
        }
    }
    return forest;
}

namespace {

// Plain union-find over dense indices.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

Partition build_reply_mention_groups(const Corpus& corpus) {
    // Users: every author plus every mentioned id, in deterministic order.
    std::map<std::string, std::size_t> user_index;
    auto intern = [&](const std::string& u) {
        return user_index.emplace(u, user_index.size()).first->second;
    };
    for (const Tweet& t : corpus.tweets()) {
        intern(t.author_id);
        for (const std::string& m : t.mentions) {
            intern(m);
        }
    }

    // Direct replies per original tweet.
    std::map<std::string, std::vector<const Tweet*>> direct_replies;
    for (const Tweet& t : corpus.tweets()) {
        if (t.reply_to && corpus.contains(*t.reply_to)) {
            direct_replies[*t.reply_to].push_back(&t);
        }
    }

    UnionFind uf(user_index.size());
    for (const Tweet& t : corpus.tweets()) {
        if (t.reply_to) {
            continue;  // seed sets form around original tweets only
        }
        std::vector<std::size_t> seed;
        seed.push_back(user_index.at(t.author_id));
        for (const std::string& m : t.mentions) {
            seed.push_back(user_index.at(m));
        }
        auto it = direct_replies.find(t.id);
        if (it != direct_replies.end()) {
            for (const Tweet* r : it->second) {
                seed.push_back(user_index.at(r->author_id));
                for (const std::string& m : r->mentions) {
                    seed.push_back(user_index.at(m));
                }
            }
        }
        for (std::size_t i = 1; i < seed.size(); ++i) {
            uf.unite(seed[0], seed[i]);
        }
    }

    Partition partition;
    std::map<std::size_t, int> group_ids;
    for (const auto& [user, idx] : user_index) {
        const std::size_t root = uf.find(idx);
        auto [it, inserted] = group_ids.emplace(root, partition.count);
        if (inserted) {
            ++partition.count;
        }
        partition.community_of.emplace(user, it->second);
    }
    return partition;
}

}  // namespace tweetpool
