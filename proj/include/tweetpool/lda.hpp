#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "tweetpool/corpus.hpp"
#include "tweetpool/pooling.hpp"

namespace tweetpool {

struct LdaConfig {
    int topics = 10;
    double alpha = 0.0;  // <= 0 means the 50/K heuristic
    double beta = 0.01;
    int iterations = 1000;
    int ll_every = 1;  // record token log-likelihood every N sweeps; 0 = never
    std::uint64_t seed = 0;

    double effective_alpha() const { return alpha > 0.0 ? alpha : 50.0 / topics; }
    void validate() const;
};

// State of a fitted LDA model: count tables from the final Gibbs sample plus
// the smoothed phi/theta estimates derived from them.
struct TopicModel {
    LdaConfig config;
    int K = 0, V = 0, D = 0;
    Vocabulary vocab;

    std::vector<std::vector<int>> topic_word;  // K x V
    std::vector<std::vector<int>> doc_topic;   // D x K
    std::vector<long> topic_total;             // K
    long total_tokens = 0;
    long oov_dropped = 0;

    std::vector<std::vector<double>> phi;    // K x V, row-stochastic
    std::vector<std::vector<double>> theta;  // D x K, row-stochastic

    std::vector<double> ll_history;  // per recorded sweep

    // Recompute phi/theta from the count tables.
    void estimate_distributions();

    // n highest-probability tokens of a topic, ties by token index.
    std::vector<std::pair<std::string, double>> top_words(int topic, int n) const;

    void save(const std::filesystem::path& path) const;
    static TopicModel load(const std::filesystem::path& path);
};

// Called after each full sweep (0-based); the model's count tables reflect
// the current Gibbs state, phi/theta are not yet estimated.
using SweepCallback = std::function<void(int sweep, const TopicModel&)>;

// Collapsed Gibbs sampling over the pooled documents. Out-of-vocabulary
// tokens are dropped and counted in model.oov_dropped. Deterministic for a
// fixed seed.
TopicModel train(const PooledCorpus& pooled, const Vocabulary& vocab,
                 const LdaConfig& config, const SweepCallback& on_sweep = {});

// Fold-in: topic assignments for the tokens are resampled with phi fixed,
// 20 burn-in sweeps, then theta estimates averaged over `sweeps` sweeps.
// Zero in-vocabulary tokens -> uniform 1/K.
std::vector<double> infer_tweet_topics(const TopicModel& model,
                                       const std::vector<std::string>& tokens,
                                       int sweeps, std::uint64_t seed);

// Token log-likelihood sum log sum_k theta_dk phi_kw of the pooled corpus
// the model was trained on.
double log_likelihood(const TopicModel& model, const PooledCorpus& pooled);

}  // namespace tweetpool
