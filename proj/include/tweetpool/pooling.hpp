#pragma once

#include <map>
#include <string>
#include <vector>

#include "tweetpool/community.hpp"
#include "tweetpool/corpus.hpp"
#include "tweetpool/graph.hpp"

namespace tweetpool {

enum class Scheme { Unpooled, Author, Hashtag, Conversation, Network, Community };

const char* scheme_name(Scheme scheme);
Scheme parse_scheme(const std::string& name);
// All six schemes in a fixed canonical order.
const std::vector<Scheme>& all_schemes();

// Token lists aligned with corpus order, as produced by tokenize_corpus.
using TokenLists = std::vector<std::vector<std::string>>;

// Tweets aggregated into training documents under one scheme. A document is
// the concatenation of its member tweets' tokens in corpus order.
struct PooledCorpus {
    Scheme scheme = Scheme::Unpooled;
    std::vector<std::vector<std::string>> docs;
    std::map<std::string, std::vector<int>> membership;  // tweet id -> doc indices
};

struct PoolStats {
    int doc_count = 0;
    long max_words = 0;
    long mean_words = 0;  // rounded to nearest integer
};

PoolStats corpus_stats(const PooledCorpus& pooled);

// One document per tweet.
PooledCorpus pool_unpooled(const Corpus& corpus, const TokenLists& tokens);
// One document per author, ordered by author id.
PooledCorpus pool_author(const Corpus& corpus, const TokenLists& tokens);
// One document per hashtag (sorted); a tweet with k hashtags joins k
// documents; hashtag-less tweets become singleton documents.
PooledCorpus pool_hashtag(const Corpus& corpus, const TokenLists& tokens);
// One document per conversation tree.
PooledCorpus pool_conversation(const Corpus& corpus, const TokenLists& tokens,
                               const ConversationForest& forest);
// One document per reply/mention user group.
PooledCorpus pool_network(const Corpus& corpus, const TokenLists& tokens,
                          const Partition& groups);
// One document per retweet-graph community; every author must be covered by
// the partition.
PooledCorpus pool_community(const Corpus& corpus, const TokenLists& tokens,
                            const Partition& partition);

// Convenience dispatcher; builds the forest / groups / Louvain partition a
// scheme needs from the corpus itself.
PooledCorpus pool(Scheme scheme, const Corpus& corpus, const TokenLists& tokens,
                  double resolution = 1.0, std::uint64_t seed = 0);

}  // namespace tweetpool
