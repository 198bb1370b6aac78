#include "tweetpool/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "tweetpool/rng.hpp"

namespace tweetpool {

const char* scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::Unpooled: return "unpooled";
        case Scheme::Author: return "author";
        case Scheme::Hashtag: return "hashtag";
        case Scheme::Conversation: return "conversation";
        case Scheme::Network: return "network";
        case Scheme::Community: return "community";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name) {
    for (Scheme s : all_schemes()) {
        if (name == scheme_name(s)) {
            return s;
        }
    }
    throw std::invalid_argument("unknown pooling scheme '" + name + "'");
}

const std::vector<Scheme>& all_schemes() {
    static const std::vector<Scheme> schemes = {
        Scheme::Unpooled,     Scheme::Author,  Scheme::Hashtag,
        Scheme::Conversation, Scheme::Network, Scheme::Community};
    return schemes;
}

PoolStats corpus_stats(const PooledCorpus& pooled) {
    PoolStats stats;
    stats.doc_count = static_cast<int>(pooled.docs.size());
    long total = 0;
    for (const auto& doc : pooled.docs) {
        stats.max_words = std::max(stats.max_words, static_cast<long>(doc.size()));
        total += static_cast<long>(doc.size());
    }
    if (stats.doc_count > 0) {
        stats.mean_words = std::lround(static_cast<double>(total) / stats.doc_count);
    }
    return stats;
}

namespace {

void check_alignment(const Corpus& corpus, const TokenLists& tokens) {
    if (corpus.size() != tokens.size()) {
        throw std::invalid_argument("token lists not aligned with corpus");
    }
}

// Builds documents from an ordered list of (key -> member tweet indices),
// concatenating tokens in corpus order.
PooledCorpus from_groups(Scheme scheme, const Corpus& corpus, const TokenLists& tokens,
                         const std::vector<std::vector<std::size_t>>& groups) {
    PooledCorpus pooled;
    pooled.scheme = scheme;
    for (const auto& members : groups) {
        std::vector<std::string> doc;
        const int doc_idx = static_cast<int>(pooled.docs.size());
        for (std::size_t i : members) {
            doc.insert(doc.end(), tokens[i].begin(), tokens[i].end());
            pooled.membership[corpus.tweets()[i].id].push_back(doc_idx);
        }
        pooled.docs.push_back(std::move(doc));
    }
    return pooled;
}

}  // namespace

PooledCorpus pool_unpooled(const Corpus& corpus, const TokenLists& tokens) {
    check_alignment(corpus, tokens);
    std::vector<std::vector<std::size_t>> groups(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        groups[i] = {i};
    }
    return from_groups(Scheme::Unpooled, corpus, tokens, groups);
}

PooledCorpus pool_author(const Corpus& corpus, const TokenLists& tokens) {
    check_alignment(corpus, tokens);
    std::map<std::string, std::vector<std::size_t>> by_author;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        by_author[corpus.tweets()[i].author_id].push_back(i);
    }
    std::vector<std::vector<std::size_t>> groups;
    for (auto& [author, members] : by_author) {
        groups.push_back(std::move(members));
    }
    return from_groups(Scheme::Author, corpus, tokens, groups);
}

PooledCorpus pool_hashtag(const Corpus& corpus, const TokenLists& tokens) {
    check_alignment(corpus, tokens);
    std::map<std::string, std::vector<std::size_t>> by_tag;
    std::vector<std::size_t> untagged;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Tweet& t = corpus.tweets()[i];
        if (t.hashtags.empty()) {
            untagged.push_back(i);
            continue;
        }
        // A tweet listing the same hashtag twice still joins it once.
        std::set<std::string> distinct(t.hashtags.begin(), t.hashtags.end());
        for (const std::string& tag : distinct) {
            by_tag[tag].push_back(i);
        }
    }
    std::vector<std::vector<std::size_t>> groups;
    for (auto& [tag, members] : by_tag) {
        groups.push_back(std::move(members));
    }
    for (std::size_t i : untagged) {
        groups.push_back({i});
    }
    return from_groups(Scheme::Hashtag, corpus, tokens, groups);
}

PooledCorpus pool_conversation(const Corpus& corpus, const TokenLists& tokens,
                               const ConversationForest& forest) {
    check_alignment(corpus, tokens);
    // Trees ordered by their root's corpus position.
    std::map<std::string, std::size_t> tree_slot;
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const std::string root = forest.root_of(corpus.tweets()[i].id);
        auto [it, inserted] = tree_slot.emplace(root, groups.size());
        if (inserted) {
            groups.emplace_back();
        }
        groups[it->second].push_back(i);
    }
    return from_groups(Scheme::Conversation, corpus, tokens, groups);
}

namespace {

PooledCorpus pool_by_user_partition(Scheme scheme, const Corpus& corpus,
                                    const TokenLists& tokens, const Partition& partition,
                                    bool require_cover) {
    check_alignment(corpus, tokens);
    std::map<int, std::vector<std::size_t>> by_group;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const std::string& author = corpus.tweets()[i].author_id;
        auto it = partition.community_of.find(author);
        if (it == partition.community_of.end()) {
            if (require_cover) {
                throw std::invalid_argument("author " + author +
                                            " not covered by the partition");
            }
            continue;
        }
        by_group[it->second].push_back(i);
    }
    std::vector<std::vector<std::size_t>> groups;
    for (auto& [group, members] : by_group) {
        groups.push_back(std::move(members));
    }
    return from_groups(scheme, corpus, tokens, groups);
}

}  // namespace

PooledCorpus pool_network(const Corpus& corpus, const TokenLists& tokens,
                          const Partition& groups) {
    return pool_by_user_partition(Scheme::Network, corpus, tokens, groups, true);
}

PooledCorpus pool_community(const Corpus& corpus, const TokenLists& tokens,
                            const Partition& partition) {
    return pool_by_user_partition(Scheme::Community, corpus, tokens, partition, true);
}

PooledCorpus pool(Scheme scheme, const Corpus& corpus, const TokenLists& tokens,
                  double resolution, std::uint64_t seed) {
    switch (scheme) {
        case Scheme::Unpooled:
            return pool_unpooled(corpus, tokens);
        case Scheme::Author:
            return pool_author(corpus, tokens);
        case Scheme::Hashtag:
            return pool_hashtag(corpus, tokens);
        case Scheme::Conversation:
            return pool_conversation(corpus, tokens, build_conversation_forest(corpus));
        case Scheme::Network:
            return pool_network(corpus, tokens, build_reply_mention_groups(corpus));
        case Scheme::Community: {
            const RetweetGraph rg = build_retweet_graph(corpus);
            const LouvainResult lr =
                louvain(rg.graph, resolution, derive_seed(seed, "louvain"));
            return pool_community(corpus, tokens, lr.partition);
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace tweetpool
