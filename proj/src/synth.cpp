#include "tweetpool/synth.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "tweetpool/rng.hpp"

namespace tweetpool {

void SynthParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) {
            throw std::invalid_argument(std::string("synth: ") + what);
        }
    };
    require(communities >= 1, "communities must be >= 1");
    require(users_per_community >= 1, "users_per_community must be >= 1");
    require(topics >= 1, "topics must be >= 1");
    require(topics_per_community >= 1, "topics_per_community must be >= 1");
    require(topics_per_community <= topics, "topics_per_community must be <= topics");
    require(vocab_per_topic >= 1, "vocab_per_topic must be >= 1");
    require(tweets_per_user >= 1, "tweets_per_user must be >= 1");
    require(tweet_length >= 1, "tweet_length must be >= 1");
    for (double p : {p_retweet_in, p_retweet_out, vocab_overlap, hashtag_rate,
                     reply_rate, mention_rate}) {
        require(p >= 0.0 && p <= 1.0, "probabilities must be in [0,1]");
    }
}

namespace {

std::string user_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "u%04d", index);
    return buf;
}

std::string tweet_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "t%06d", index);
    return buf;
}

std::string topic_label(int topic) { return "topic" + std::to_string(topic); }

}  // namespace

SynthData generate(const SynthParams& params) {
    params.validate();
    Rng rng(splitmix64(params.seed));

    const int n_users = params.communities * params.users_per_community;
    auto community_of = [&](int user) { return user / params.users_per_community; };

    // Topic sets per community: disjoint consecutive blocks when they all
    // fit, otherwise staggered windows (start = c mod topics) so that no two
    // topics co-occur in every community — pooled documents then carry
    // enough contrast for the topics to stay identifiable.
    std::vector<std::vector<int>> community_topics(params.communities);
    const bool disjoint_blocks =
        params.communities * params.topics_per_community <= params.topics;
    for (int c = 0; c < params.communities; ++c) {
        const int start =
            disjoint_blocks ? c * params.topics_per_community : c % params.topics;
        for (int j = 0; j < params.topics_per_community; ++j) {
            community_topics[c].push_back((start + j) % params.topics);
        }
    }
    // Fixed per-community mixture over its topics.
    std::vector<std::vector<double>> community_mixture(params.communities);
    for (int c = 0; c < params.communities; ++c) {
        double total = 0.0;
        for (int j = 0; j < params.topics_per_community; ++j) {
            const double w = 0.25 + rng.uniform01();
            community_mixture[c].push_back(w);
            total += w;
        }
        for (double& w : community_mixture[c]) {
            w /= total;
        }
    }
    auto sample_topic = [&](int c) {
        const double u = rng.uniform01();
        double acc = 0.0;
        for (std::size_t j = 0; j < community_mixture[c].size(); ++j) {
            acc += community_mixture[c][j];
            if (u < acc) {
                return community_topics[c][j];
            }
        }
        return community_topics[c].back();
    };

    auto sample_word = [&](int topic) {
        // Alphanumeric only so the token survives tokenization unchanged.
        if (params.vocab_overlap > 0.0 && rng.uniform01() < params.vocab_overlap) {
            // Topic-neutral shared word.
            return "sx" + std::to_string(rng.below(params.vocab_per_topic));
        }
        return "w" + std::to_string(topic) + "x" +
               std::to_string(rng.below(params.vocab_per_topic));
    };

    SynthData data;
    std::vector<Tweet> tweets;
    int next_tweet = 0;
    std::int64_t clock = 1000000;

    for (int u = 0; u < n_users; ++u) {
        data.truth.user_community.emplace(user_name(u), community_of(u));
    }

    // Base tweets, users interleaved in time.
    std::vector<std::vector<int>> tweets_by_user(n_users);  // indices into `tweets`
    for (int round = 0; round < params.tweets_per_user; ++round) {
        for (int u = 0; u < n_users; ++u) {
            const int c = community_of(u);
            const int topic = sample_topic(c);
            Tweet t;
            t.id = tweet_name(next_tweet++);
            t.author_id = user_name(u);
            t.timestamp = clock++;
            std::string text;
            for (int i = 0; i < params.tweet_length; ++i) {
                if (i > 0) {
                    text += ' ';
                }
                text += sample_word(topic);
            }
            t.text = text;
            t.query_label = topic_label(topic);
            if (rng.uniform01() < params.hashtag_rate) {
                t.hashtags.push_back("#" + topic_label(topic));
            }
            if (rng.uniform01() < params.mention_rate &&
                params.users_per_community > 1) {
                int other = u;
                while (other == u) {
                    other = c * params.users_per_community +
                            static_cast<int>(rng.below(params.users_per_community));
                }
                t.mentions.push_back(user_name(other));
            }
            if (rng.uniform01() < params.reply_rate) {
                // Reply to an earlier tweet by a same-community user.
                std::vector<int> candidates;
                for (int v = c * params.users_per_community;
                     v < (c + 1) * params.users_per_community; ++v) {
                    for (int idx : tweets_by_user[v]) {
                        candidates.push_back(idx);
                    }
                }
                if (!candidates.empty()) {
                    t.reply_to = tweets[candidates[rng.below(candidates.size())]].id;
                }
            }
            data.truth.tweet_topic.emplace(t.id, topic);
            data.truth.tweet_label.emplace(t.id, t.query_label);
            tweets_by_user[u].push_back(static_cast<int>(tweets.size()));
            tweets.push_back(std::move(t));
        }
    }

    // Retweet events per user pair: planted-partition edge probabilities.
    // Each retweet lands at a uniform time after its original so retweets
    // interleave with base tweets instead of piling up at the end (a time
    // split would otherwise strip most edges from the train graph).
    const std::int64_t horizon = clock;
    for (int u = 0; u < n_users; ++u) {
        for (int v = u + 1; v < n_users; ++v) {
            const bool same = community_of(u) == community_of(v);
            const double p = same ? params.p_retweet_in : params.p_retweet_out;
            if (rng.uniform01() >= p) {
                continue;
            }
            const bool u_retweets = rng.below(2) == 0;
            const int retweeter = u_retweets ? u : v;
            const int source = u_retweets ? v : u;
            const int original_idx =
                tweets_by_user[source][rng.below(tweets_by_user[source].size())];
            const Tweet& original = tweets[original_idx];
            Tweet t;
            t.id = tweet_name(next_tweet++);
            t.author_id = user_name(retweeter);
            t.timestamp = original.timestamp + 1 +
                          static_cast<std::int64_t>(rng.below(
                              static_cast<std::size_t>(horizon - original.timestamp)));
            t.text = original.text;
            t.query_label = original.query_label;
            t.retweet_of = original.id;
            data.truth.tweet_topic.emplace(t.id, data.truth.tweet_topic.at(original.id));
            data.truth.tweet_label.emplace(t.id, t.query_label);
            tweets.push_back(std::move(t));
        }
    }

    data.corpus = Corpus(std::move(tweets));
    return data;
}

WeightedGraph planted_partition_graph(int blocks, int nodes_per_block, double p_in,
                                      double p_out, std::uint64_t seed,
                                      Partition* planted) {
    if (blocks < 1 || nodes_per_block < 1) {
        throw std::invalid_argument("planted_partition_graph: bad block sizes");
    }
    const int n = blocks * nodes_per_block;
    Rng rng(splitmix64(seed));
    WeightedGraph graph;
    if (planted) {
        planted->community_of.clear();
        planted->count = blocks;
    }
    for (int u = 0; u < n; ++u) {
        graph.add_node(user_name(u));
        if (planted) {
            planted->community_of.emplace(user_name(u), u / nodes_per_block);
        }
    }
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            const bool same = u / nodes_per_block == v / nodes_per_block;
            if (rng.uniform01() < (same ? p_in : p_out)) {
                graph.add_edge(user_name(u), user_name(v), 1.0);
            }
        }
    }
    return graph;
}

void GroundTruth::save(const std::filesystem::path& path) const {
    nlohmann::json j;
    j["user_community"] = user_community;
    j["tweet_topic"] = tweet_topic;
    j["tweet_label"] = tweet_label;
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

GroundTruth GroundTruth::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    nlohmann::json j;
    in >> j;
    GroundTruth truth;
    truth.user_community = j.at("user_community").get<std::map<std::string, int>>();
    truth.tweet_topic = j.at("tweet_topic").get<std::map<std::string, int>>();
    truth.tweet_label = j.at("tweet_label").get<std::map<std::string, std::string>>();
    return truth;
}

}  // namespace tweetpool
