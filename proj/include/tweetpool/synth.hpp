#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "tweetpool/corpus.hpp"
#include "tweetpool/graph.hpp"

namespace tweetpool {

// Knobs for the planted-community / planted-topic corpus generator.
struct SynthParams {
    int communities = 4;
    int users_per_community = 25;
    int topics = 4;
    int topics_per_community = 2;
    int vocab_per_topic = 50;
    int tweets_per_user = 10;
    int tweet_length = 8;
    double p_retweet_in = 0.3;   // per intra-community user pair
    double p_retweet_out = 0.01; // per cross-community user pair
    double vocab_overlap = 0.0;  // chance a word comes from a shared vocabulary
    double hashtag_rate = 0.2;
    double reply_rate = 0.1;
    double mention_rate = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
};

struct GroundTruth {
    std::map<std::string, int> user_community;
    std::map<std::string, int> tweet_topic;
    std::map<std::string, std::string> tweet_label;  // = dominant topic name

    void save(const std::filesystem::path& path) const;
    static GroundTruth load(const std::filesystem::path& path);
};

struct SynthData {
    Corpus corpus;
    GroundTruth truth;
};

// Per-topic vocabularies are disjoint (vocab_overlap > 0 additionally mixes
// in words from a topic-neutral shared pool); each community draws a fixed mixture
// over its assigned topics; every tweet samples its topic from the author's
// community mixture. Retweet pairs follow planted-partition probabilities.
// Deterministic for a fixed seed.
SynthData generate(const SynthParams& params);

// Bare planted-partition graph (no corpus): blocks of equal size, edge
// probability p_in inside a block and p_out across blocks, unit weights.
// `planted` receives the block assignment.
WeightedGraph planted_partition_graph(int blocks, int nodes_per_block, double p_in,
                                      double p_out, std::uint64_t seed,
                                      Partition* planted = nullptr);

}  // namespace tweetpool
