#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "tweetpool/lda.hpp"
#include "tweetpool/pooling.hpp"
#include "tweetpool/synth.hpp"

using namespace tweetpool;

namespace {

// Two disjoint vocabulary halves used by two disjoint document sets.
struct SeparatedFixture {
    PooledCorpus pooled;
    Vocabulary vocab;
    std::vector<std::string> half0, half1;

    SeparatedFixture() {
        SynthParams params;
        params.communities = 2;
        params.topics = 2;
        params.topics_per_community = 1;
        params.users_per_community = 10;
        params.tweets_per_user = 20;
        params.vocab_per_topic = 20;
        params.tweet_length = 8;
        params.p_retweet_in = 0.1;
        params.p_retweet_out = 0.0;
        params.seed = 99;
        const SynthData data = generate(params);
        const auto tokens = tokenize_corpus(data.corpus, {});
        pooled = pool_unpooled(data.corpus, tokens);
        vocab = build_vocabulary(data.corpus, {}, 1);
        for (int w = 0; w < vocab.size(); ++w) {
            const std::string& tok = vocab.token_at(w);
            (tok.rfind("w0", 0) == 0 ? half0 : half1).push_back(tok);
        }
    }

    double half_mass(const TopicModel& model, int topic,
                     const std::vector<std::string>& half) const {
        double mass = 0.0;
        for (const std::string& tok : half) {
            mass += model.phi[topic][*model.vocab.index_of(tok)];
        }
        return mass;
    }
};

TopicModel train_separated(const SeparatedFixture& fx, int sweeps = 200) {
    LdaConfig config;
    config.topics = 2;
    config.alpha = 0.5;
    config.iterations = sweeps;
    config.ll_every = 1;
    config.seed = 7;
    return train(fx.pooled, fx.vocab, config);
}

void check_row_stochastic(const std::vector<std::vector<double>>& rows) {
    for (const auto& row : rows) {
        const double sum = std::accumulate(row.begin(), row.end(), 0.0);
        CHECK(std::abs(sum - 1.0) < 1e-9);
    }
}

}  // namespace

TEST_CASE("two-topic model separates disjoint vocabulary halves") {
    const SeparatedFixture fx;
    const TopicModel model = train_separated(fx);
    const double t0_h0 = fx.half_mass(model, 0, fx.half0);
    const double t1_h1 = fx.half_mass(model, 1, fx.half1);
    const double t0_best = std::max(t0_h0, 1.0 - t0_h0);
    const double t1_best = std::max(t1_h1, 1.0 - t1_h1);
    CHECK(t0_best >= 0.9);
    CHECK(t1_best >= 0.9);
    // The two topics claim different halves.
    CHECK(((t0_h0 > 0.5) != (fx.half_mass(model, 1, fx.half0) > 0.5)));
    check_row_stochastic(model.phi);
    check_row_stochastic(model.theta);
}

TEST_CASE("K=1 gives a smoothed unigram phi and all-ones theta") {
    PooledCorpus pooled;
    pooled.docs = {{"a", "a", "b"}, {"b", "c"}};
    Vocabulary vocab;
    for (const auto& doc : pooled.docs) {
        for (const auto& tok : doc) {
            vocab.add(tok);
        }
    }
    LdaConfig config;
    config.topics = 1;
    config.alpha = 1.0;
    config.iterations = 5;
    const TopicModel model = train(pooled, vocab, config);
    for (int d = 0; d < model.D; ++d) {
        CHECK(model.theta[d][0] == doctest::Approx(1.0));
    }
    // phi = (count + beta) / (total + V*beta)
    const double denom = 5.0 + 3 * config.beta;
    CHECK(model.phi[0][*vocab.index_of("a")] ==
          doctest::Approx((2 + config.beta) / denom));
    CHECK(model.phi[0][*vocab.index_of("b")] ==
          doctest::Approx((2 + config.beta) / denom));
    CHECK(model.phi[0][*vocab.index_of("c")] ==
          doctest::Approx((1 + config.beta) / denom));
}

TEST_CASE("training is deterministic for a fixed seed") {
    const SeparatedFixture fx;
    const TopicModel a = train_separated(fx, 30);
    const TopicModel b = train_separated(fx, 30);
    CHECK(a.topic_word == b.topic_word);
    CHECK(a.doc_topic == b.doc_topic);
    CHECK(a.topic_total == b.topic_total);
    CHECK(a.ll_history == b.ll_history);
}

TEST_CASE("count conservation holds after every sweep") {
    const SeparatedFixture fx;
    LdaConfig config;
    config.topics = 2;
    config.iterations = 10;
    config.seed = 3;
    int checked = 0;
    train(fx.pooled, fx.vocab, config, [&](int, const TopicModel& m) {
        long topic_word_sum = 0;
        for (int k = 0; k < m.K; ++k) {
            long row = 0;
            for (int w = 0; w < m.V; ++w) {
                row += m.topic_word[k][w];
            }
            REQUIRE(row == m.topic_total[k]);
            topic_word_sum += row;
        }
        REQUIRE(topic_word_sum == m.total_tokens);
        long doc_topic_sum = 0;
        for (int d = 0; d < m.D; ++d) {
            for (int k = 0; k < m.K; ++k) {
                doc_topic_sum += m.doc_topic[d][k];
            }
        }
        REQUIRE(doc_topic_sum == m.total_tokens);
        ++checked;
    });
    CHECK(checked == 10);
}

TEST_CASE("out-of-vocabulary tokens are dropped and counted") {
    PooledCorpus pooled;
    pooled.docs = {{"known", "unknown", "known"}};
    Vocabulary vocab;
    vocab.add("known");
    LdaConfig config;
    config.topics = 2;
    config.iterations = 2;
    const TopicModel model = train(pooled, vocab, config);
    CHECK(model.total_tokens == 2);
    CHECK(model.oov_dropped == 1);

    SUBCASE("all documents empty after filtering is an error") {
        PooledCorpus bad;
        bad.docs = {{"unknown"}};
        CHECK_THROWS(train(bad, vocab, config));
    }
}

TEST_CASE("infer_tweet_topics") {
    const SeparatedFixture fx;
    const TopicModel model = train_separated(fx);

    SUBCASE("empty token list gives uniform") {
        const auto dist = infer_tweet_topics(model, {}, 10, 1);
        CHECK(dist == std::vector<double>{0.5, 0.5});
    }
    SUBCASE("tokens from one half concentrate on that half's topic") {
        // Identify which topic owns half0.
        const int topic0 = fx.half_mass(model, 0, fx.half0) > 0.5 ? 0 : 1;
        std::vector<std::string> tokens(fx.half0.begin(), fx.half0.begin() + 8);
        const auto dist = infer_tweet_topics(model, tokens, 50, 5);
        CHECK(dist[topic0] >= 0.8);
    }
    SUBCASE("output sums to one") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto dist =
                infer_tweet_topics(model, {"w0x1", "w1x2", "nonsense"}, 30, seed);
            CHECK(std::abs(std::accumulate(dist.begin(), dist.end(), 0.0) - 1.0) < 1e-9);
        }
    }
    SUBCASE("inference on a training document's tokens tracks its theta row") {
        // Pick a reasonably long training document and compare.
        double best_cosine = 0.0;
        for (int d = 0; d < std::min(model.D, 20); ++d) {
            const auto dist = infer_tweet_topics(model, fx.pooled.docs[d], 100, 11);
            double dot = 0.0, na = 0.0, nb = 0.0;
            for (int k = 0; k < model.K; ++k) {
                dot += dist[k] * model.theta[d][k];
                na += dist[k] * dist[k];
                nb += model.theta[d][k] * model.theta[d][k];
            }
            best_cosine = std::max(best_cosine, dot / std::sqrt(na * nb));
        }
        CHECK(best_cosine >= 0.9);
    }
}

TEST_CASE("log likelihood") {
    SUBCASE("single doc, single token, K=1") {
        PooledCorpus pooled;
        pooled.docs = {{"only"}};
        Vocabulary vocab;
        vocab.add("only");
        LdaConfig config;
        config.topics = 1;
        config.alpha = 1.0;
        config.iterations = 1;
        const TopicModel model = train(pooled, vocab, config);
        const double expected = std::log((1.0 + config.beta) / (1.0 + config.beta));
        CHECK(log_likelihood(model, pooled) == doctest::Approx(expected));
    }
    SUBCASE("always non-positive") {
        const SeparatedFixture fx;
        const TopicModel model = train_separated(fx, 20);
        CHECK(log_likelihood(model, fx.pooled) <= 0.0);
        for (double ll : model.ll_history) {
            CHECK(ll <= 0.0);
        }
    }
    SUBCASE("windowed trend improves and then plateaus") {
        const SeparatedFixture fx;
        const TopicModel model = train_separated(fx, 200);
        REQUIRE(model.ll_history.size() == 200);
        // Mean over consecutive 20-sweep windows.
        std::vector<double> windows;
        for (std::size_t start = 0; start + 20 <= 200; start += 20) {
            double sum = 0.0;
            for (std::size_t i = start; i < start + 20; ++i) {
                sum += model.ll_history[i];
            }
            windows.push_back(sum / 20.0);
        }
        // The first window still covers burn-in, so every later window must
        // beat it, and the post-burn-in windows only jitter around the
        // stationary value (within 0.1% of it).
        double best = windows[1];
        for (std::size_t i = 1; i < windows.size(); ++i) {
            CHECK(windows[i] > windows[0]);
            best = std::max(best, windows[i]);
        }
        for (std::size_t i = 1; i < windows.size(); ++i) {
            CHECK(std::abs(windows[i] - best) <= 0.001 * std::abs(best));
        }
        CHECK(windows.back() > windows.front());
    }
}

TEST_CASE("top_words") {
    const SeparatedFixture fx;
    const TopicModel model = train_separated(fx);
    CHECK(model.top_words(0, 0).empty());
    CHECK(model.top_words(0, model.V + 10).size() == static_cast<std::size_t>(model.V));
    CHECK_THROWS(model.top_words(2, 5));
    CHECK_THROWS(model.top_words(-1, 5));

    // Top 5 words of the topic owning half0 all come from half0.
    const int topic0 = fx.half_mass(model, 0, fx.half0) > 0.5 ? 0 : 1;
    for (const auto& [token, prob] : model.top_words(topic0, 5)) {
        CHECK(token.rfind("w0", 0) == 0);
    }
    // Descending probabilities.
    const auto top = model.top_words(0, 10);
    for (std::size_t i = 1; i < top.size(); ++i) {
        CHECK(top[i].second <= top[i - 1].second);
    }
}

TEST_CASE("model save/load round trip") {
    testutil::TempDir dir;
    const SeparatedFixture fx;
    const TopicModel model = train_separated(fx, 20);
    const auto path = dir.file("model.json");
    model.save(path);
    const TopicModel loaded = TopicModel::load(path);
    CHECK(loaded.K == model.K);
    CHECK(loaded.V == model.V);
    CHECK(loaded.D == model.D);
    CHECK(loaded.topic_word == model.topic_word);
    CHECK(loaded.doc_topic == model.doc_topic);
    CHECK(loaded.phi == model.phi);
    CHECK(loaded.theta == model.theta);
    CHECK(loaded.ll_history == model.ll_history);
    for (int w = 0; w < model.V; ++w) {
        CHECK(loaded.vocab.token_at(w) == model.vocab.token_at(w));
        CHECK(loaded.vocab.count_at(w) == model.vocab.count_at(w));
    }
    // Inference through the loaded model is identical.
    CHECK(infer_tweet_topics(loaded, {"w0x1"}, 10, 3) ==
          infer_tweet_topics(model, {"w0x1"}, 10, 3));
}

TEST_CASE("config validation") {
    PooledCorpus pooled;
    pooled.docs = {{"a"}};
    Vocabulary vocab;
    vocab.add("a");
    LdaConfig config;
    config.topics = 0;
    CHECK_THROWS(train(pooled, vocab, config));
    config.topics = 2;
    config.beta = 0.0;
    CHECK_THROWS(train(pooled, vocab, config));
    config.beta = 0.01;
    config.iterations = 0;
    CHECK_THROWS(train(pooled, vocab, config));
}
