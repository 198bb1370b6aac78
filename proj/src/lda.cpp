#include "tweetpool/lda.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "tweetpool/rng.hpp"

namespace tweetpool {

void LdaConfig::validate() const {
    if (topics < 1) {
        throw std::invalid_argument("LDA: topics must be >= 1");
    }
    if (alpha < 0.0) {
        throw std::invalid_argument("LDA: alpha must be positive (or 0 for 50/K)");
    }
    if (!(beta > 0.0)) {
        throw std::invalid_argument("LDA: beta must be positive");
    }
    if (iterations < 1) {
        throw std::invalid_argument("LDA: iterations must be >= 1");
    }
    if (ll_every < 0) {
        throw std::invalid_argument("LDA: ll_every must be >= 0");
    }
}

namespace {

// Documents as vocabulary indices plus per-document (word, count) pairs.
struct IndexedDocs {
    std::vector<std::vector<int>> docs;
    std::vector<std::vector<std::pair<int, int>>> word_counts;
    long total_tokens = 0;
    long oov = 0;
};

IndexedDocs index_docs(const PooledCorpus& pooled, const Vocabulary& vocab) {
    IndexedDocs out;
    out.docs.reserve(pooled.docs.size());
    for (const auto& doc : pooled.docs) {
        std::vector<int> ids;
        ids.reserve(doc.size());
        for (const std::string& tok : doc) {
            if (auto idx = vocab.index_of(tok)) {
                ids.push_back(*idx);
            } else {
                ++out.oov;
            }
        }
        out.total_tokens += static_cast<long>(ids.size());
        std::map<int, int> counts;
        for (int w : ids) {
            ++counts[w];
        }
        out.word_counts.emplace_back(counts.begin(), counts.end());
        out.docs.push_back(std::move(ids));
    }
    return out;
}

// Token log-likelihood from current counts; iterates distinct (doc, word)
// pairs so pooled corpora with few large documents evaluate cheaply.
double current_log_likelihood(const TopicModel& m, const IndexedDocs& indexed) {
    const double alpha = m.config.effective_alpha();
    const double beta = m.config.beta;
    double ll = 0.0;
    std::vector<double> theta(m.K);
    for (int d = 0; d < m.D; ++d) {
        long n_d = 0;
        for (int k = 0; k < m.K; ++k) {
            n_d += m.doc_topic[d][k];
        }
        const double denom = static_cast<double>(n_d) + m.K * alpha;
        for (int k = 0; k < m.K; ++k) {
            theta[k] = (m.doc_topic[d][k] + alpha) / denom;
        }
        for (const auto& [w, count] : indexed.word_counts[d]) {
            double p = 0.0;
            for (int k = 0; k < m.K; ++k) {
                p += theta[k] * (m.topic_word[k][w] + beta) /
                     (m.topic_total[k] + m.V * beta);
            }
            ll += count * std::log(p);
        }
    }
    return ll;
}

}  // namespace

void TopicModel::estimate_distributions() {
    const double alpha = config.effective_alpha();
    const double beta = config.beta;
    phi.assign(K, std::vector<double>(V, 0.0));
    for (int k = 0; k < K; ++k) {
        const double denom = static_cast<double>(topic_total[k]) + V * beta;
        for (int w = 0; w < V; ++w) {
            phi[k][w] = (topic_word[k][w] + beta) / denom;
        }
    }
    theta.assign(D, std::vector<double>(K, 0.0));
    for (int d = 0; d < D; ++d) {
        long n_d = 0;
        for (int k = 0; k < K; ++k) {
            n_d += doc_topic[d][k];
        }
        const double denom = static_cast<double>(n_d) + K * alpha;
        for (int k = 0; k < K; ++k) {
            theta[d][k] = (doc_topic[d][k] + alpha) / denom;
        }
    }
}

std::vector<std::pair<std::string, double>> TopicModel::top_words(int topic,
                                                                  int n) const {
    if (topic < 0 || topic >= K) {
        throw std::out_of_range("topic index out of range");
    }
    std::vector<int> order(V);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (phi[topic][a] != phi[topic][b]) {
            return phi[topic][a] > phi[topic][b];
        }
        return a < b;
    });
    std::vector<std::pair<std::string, double>> out;
    const int limit = std::min(n, V);
    for (int i = 0; i < std::max(limit, 0); ++i) {
        out.emplace_back(vocab.token_at(order[i]), phi[topic][order[i]]);
    }
    return out;
}

TopicModel train(const PooledCorpus& pooled, const Vocabulary& vocab,
                 const LdaConfig& config, const SweepCallback& on_sweep) {
    config.validate();
    if (pooled.docs.empty()) {
        throw std::invalid_argument("LDA: pooled corpus has no documents");
    }
    const IndexedDocs indexed = index_docs(pooled, vocab);
    if (indexed.total_tokens == 0) {
        throw std::invalid_argument("LDA: all documents empty after vocabulary filtering");
    }

    TopicModel model;
    model.config = config;
    model.K = config.topics;
    model.V = vocab.size();
    model.D = static_cast<int>(indexed.docs.size());
    model.vocab = vocab;
    model.total_tokens = indexed.total_tokens;
    model.oov_dropped = indexed.oov;
    model.topic_word.assign(model.K, std::vector<int>(model.V, 0));
    model.doc_topic.assign(model.D, std::vector<int>(model.K, 0));
    model.topic_total.assign(model.K, 0);

    const double alpha = config.effective_alpha();
    const double beta = config.beta;
    const double v_beta = model.V * beta;

    Rng rng(splitmix64(config.seed));
    std::vector<std::vector<int>> z(model.D);
    for (int d = 0; d < model.D; ++d) {
        z[d].resize(indexed.docs[d].size());
        for (std::size_t i = 0; i < indexed.docs[d].size(); ++i) {
            const int k = static_cast<int>(rng.below(model.K));
            z[d][i] = k;
            ++model.doc_topic[d][k];
            ++model.topic_word[k][indexed.docs[d][i]];
            ++model.topic_total[k];
        }
    }

    std::vector<double> cumulative(model.K);
    for (int sweep = 0; sweep < config.iterations; ++sweep) {
        for (int d = 0; d < model.D; ++d) {
            const auto& doc = indexed.docs[d];
            for (std::size_t i = 0; i < doc.size(); ++i) {
                const int w = doc[i];
                const int old_k = z[d][i];
                --model.doc_topic[d][old_k];
                --model.topic_word[old_k][w];
                --model.topic_total[old_k];

                double sum = 0.0;
                for (int k = 0; k < model.K; ++k) {
                    sum += (model.topic_word[k][w] + beta) /
                           (model.topic_total[k] + v_beta) *
                           (model.doc_topic[d][k] + alpha);
                    cumulative[k] = sum;
                }
                const double u = rng.uniform01() * sum;
                int new_k = 0;
                while (new_k < model.K - 1 && cumulative[new_k] <= u) {
                    ++new_k;
                }
                z[d][i] = new_k;
                ++model.doc_topic[d][new_k];
                ++model.topic_word[new_k][w];
                ++model.topic_total[new_k];
            }
        }
        if (config.ll_every > 0 && (sweep + 1) % config.ll_every == 0) {
            model.ll_history.push_back(current_log_likelihood(model, indexed));
        }
        if (on_sweep) {
            on_sweep(sweep, model);
        }
    }

    model.estimate_distributions();
    return model;
}

std::vector<double> infer_tweet_topics(const TopicModel& model,
                                       const std::vector<std::string>& tokens,
                                       int sweeps, std::uint64_t seed) {
    const int K = model.K;
    std::vector<int> ids;
    for (const std::string& tok : tokens) {
        if (auto idx = model.vocab.index_of(tok)) {
            ids.push_back(*idx);
        }
    }
    if (ids.empty()) {
        return std::vector<double>(K, 1.0 / K);
    }
    const double alpha = model.config.effective_alpha();
    constexpr int kBurnIn = 20;
    const int averaged = std::max(sweeps, 1);

    Rng rng(splitmix64(seed));
    std::vector<int> z(ids.size());
    std::vector<int> n_k(K, 0);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const int k = static_cast<int>(rng.below(K));
        z[i] = k;
        ++n_k[k];
    }

    std::vector<double> cumulative(K);
    std::vector<double> accumulated(K, 0.0);
    for (int sweep = 0; sweep < kBurnIn + averaged; ++sweep) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const int w = ids[i];
            --n_k[z[i]];
            double sum = 0.0;
            for (int k = 0; k < K; ++k) {
                sum += model.phi[k][w] * (n_k[k] + alpha);
                cumulative[k] = sum;
            }
            const double u = rng.uniform01() * sum;
            int new_k = 0;
            while (new_k < K - 1 && cumulative[new_k] <= u) {
                ++new_k;
            }
            z[i] = new_k;
            ++n_k[new_k];
        }
        if (sweep >= kBurnIn) {
            const double denom = static_cast<double>(ids.size()) + K * alpha;
            for (int k = 0; k < K; ++k) {
                accumulated[k] += (n_k[k] + alpha) / denom;
            }
        }
    }
    double total = 0.0;
    for (double& v : accumulated) {
        v /= averaged;
        total += v;
    }
    for (double& v : accumulated) {
        v /= total;
    }
    return accumulated;
}

double log_likelihood(const TopicModel& model, const PooledCorpus& pooled) {
    if (static_cast<int>(pooled.docs.size()) != model.D) {
        throw std::invalid_argument(
            "log_likelihood: pooled corpus does not match the trained model");
    }
    const IndexedDocs indexed = index_docs(pooled, model.vocab);
    return current_log_likelihood(model, indexed);
}

void TopicModel::save(const std::filesystem::path& path) const {
    nlohmann::json j;
    j["format"] = "tweetpool-lda-1";
    j["config"] = {{"topics", config.topics},   {"alpha", config.alpha},
                   {"beta", config.beta},       {"iterations", config.iterations},
                   {"ll_every", config.ll_every}, {"seed", config.seed}};
    std::vector<std::string> tokens;
    std::vector<long> counts;
    for (int w = 0; w < V; ++w) {
        tokens.push_back(vocab.token_at(w));
        counts.push_back(vocab.count_at(w));
    }
    j["vocabulary"] = {{"tokens", tokens}, {"counts", counts}};
    j["topic_word"] = topic_word;
    j["doc_topic"] = doc_topic;
    j["topic_total"] = topic_total;
    j["total_tokens"] = total_tokens;
    j["oov_dropped"] = oov_dropped;
    j["ll_history"] = ll_history;

    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << j.dump() << '\n';
}

TopicModel TopicModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    nlohmann::json j;
    in >> j;
    if (j.value("format", "") != "tweetpool-lda-1") {
        throw std::runtime_error("unsupported model format in " + path.string());
    }
    TopicModel m;
    const auto& c = j.at("config");
    m.config.topics = c.at("topics").get<int>();
    m.config.alpha = c.at("alpha").get<double>();
    m.config.beta = c.at("beta").get<double>();
    m.config.iterations = c.at("iterations").get<int>();
    m.config.ll_every = c.at("ll_every").get<int>();
    m.config.seed = c.at("seed").get<std::uint64_t>();

    const auto tokens = j.at("vocabulary").at("tokens").get<std::vector<std::string>>();
    const auto counts = j.at("vocabulary").at("counts").get<std::vector<long>>();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        m.vocab.add(tokens[i], counts[i]);
    }
    m.topic_word = j.at("topic_word").get<std::vector<std::vector<int>>>();
    m.doc_topic = j.at("doc_topic").get<std::vector<std::vector<int>>>();
    m.topic_total = j.at("topic_total").get<std::vector<long>>();
    m.total_tokens = j.at("total_tokens").get<long>();
    m.oov_dropped = j.at("oov_dropped").get<long>();
    m.ll_history = j.at("ll_history").get<std::vector<double>>();
    m.K = static_cast<int>(m.topic_word.size());
    m.V = m.K > 0 ? static_cast<int>(m.topic_word[0].size()) : 0;
    m.D = static_cast<int>(m.doc_topic.size());
    m.estimate_distributions();
    return m;
}

}  // namespace tweetpool
