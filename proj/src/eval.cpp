#include "tweetpool/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "tweetpool/rng.hpp"

namespace tweetpool {

namespace {

int argmax_lowest(const std::vector<double>& v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i) {
        if (v[i] > v[best]) {
            best = i;
        }
    }
    return best;
}

// Contingency table between two aligned assignments plus marginals.
struct Contingency {
    std::map<std::pair<int, int>, long> cells;
    std::map<int, long> row, col;
    long n = 0;

    void add(int a, int b) {
        ++cells[{a, b}];
        ++row[a];
        ++col[b];
        ++n;
    }
};

double entropy(const std::map<int, long>& marginal, long n) {
    double h = 0.0;
    for (const auto& [key, count] : marginal) {
        if (count > 0) {
            const double p = static_cast<double>(count) / n;
            h -= p * std::log(p);
        }
    }
    return h;
}

double nmi_from_contingency(const Contingency& c) {
    if (c.n == 0) {
        throw std::invalid_argument("nmi: empty input");
    }
    const double h_row = entropy(c.row, c.n);
    const double h_col = entropy(c.col, c.n);
    if (h_row == 0.0 && h_col == 0.0) {
        return 1.0;  // both single-block partitions of the same set
    }
    double mi = 0.0;
    for (const auto& [cell, count] : c.cells) {
        if (count == 0) {
            continue;
        }
        const double p = static_cast<double>(count) / c.n;
        const double pr = static_cast<double>(c.row.at(cell.first)) / c.n;
        const double pc = static_cast<double>(c.col.at(cell.second)) / c.n;
        mi += p * std::log(p / (pr * pc));
    }
    return 2.0 * mi / (h_row + h_col);
}

void check_same_ids(const ClusterAssignment& clusters, const LabelAssignment& labels) {
    if (clusters.cluster_of.empty() || labels.label_of.empty()) {
        throw std::invalid_argument("metric input is empty");
    }
    if (clusters.cluster_of.size() != labels.label_of.size()) {
        throw std::invalid_argument("cluster and label id sets differ");
    }
    for (const auto& [id, c] : clusters.cluster_of) {
        if (labels.label_of.count(id) == 0) {
            throw std::invalid_argument("tweet " + id + " has a cluster but no label");
        }
    }
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::vector<double>> infer_features(const TopicModel& model,
                                                const Corpus& tweets,
                                                const StopwordSet& stopwords,
                                                int sweeps, std::uint64_t seed) {
    std::vector<std::vector<double>> features;
    features.reserve(tweets.size());
    for (const Tweet& t : tweets.tweets()) {
        features.push_back(infer_tweet_topics(model, tokenize(t.text, stopwords), sweeps,
                                              derive_seed(seed, "infer:" + t.id)));
    }
    return features;
}

}  // namespace

ClusterAssignment assign_clusters(const TopicModel& model, const Corpus& tweets,
                                  const StopwordSet& stopwords, int sweeps,
                                  std::uint64_t seed) {
    ClusterAssignment assignment;
    std::map<int, int> dense;
    std::vector<std::pair<std::string, int>> raw;
    for (const Tweet& t : tweets.tweets()) {
        const auto dist = infer_tweet_topics(model, tokenize(t.text, stopwords), sweeps,
                                             derive_seed(seed, "infer:" + t.id));
        const int topic = argmax_lowest(dist);
        raw.emplace_back(t.id, topic);
        dense.emplace(topic, 0);
    }
    int next = 0;
    for (auto& [topic, idx] : dense) {
        idx = next++;
    }
    for (const auto& [id, topic] : raw) {
        assignment.cluster_of.emplace(id, dense.at(topic));
    }
    return assignment;
}

double purity(const ClusterAssignment& clusters, const LabelAssignment& labels) {
    check_same_ids(clusters, labels);
    std::map<int, std::map<std::string, long>> per_cluster;
    for (const auto& [id, c] : clusters.cluster_of) {
        ++per_cluster[c][labels.label_of.at(id)];
    }
    long majority_sum = 0;
    for (const auto& [c, counts] : per_cluster) {
        long best = 0;
        for (const auto& [label, count] : counts) {
            best = std::max(best, count);
        }
        majority_sum += best;
    }
    return static_cast<double>(majority_sum) /
           static_cast<double>(clusters.cluster_of.size());
}

double nmi(const ClusterAssignment& clusters, const LabelAssignment& labels) {
    check_same_ids(clusters, labels);
    Contingency c;
    std::map<std::string, int> label_ids;
    for (const auto& [id, cluster] : clusters.cluster_of) {
        const std::string& label = labels.label_of.at(id);
        const int lab = static_cast<int>(
            label_ids.emplace(label, label_ids.size()).first->second);
        c.add(cluster, lab);
    }
    return nmi_from_contingency(c);
}

double nmi_assignments(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("nmi: assignments differ in length");
    }
    Contingency c;
    for (std::size_t i = 0; i < a.size(); ++i) {
        c.add(a[i], b[i]);
    }
    return nmi_from_contingency(c);
}

void GaussianNB::fit(const std::vector<std::vector<double>>& features,
                     const std::vector<std::string>& labels) {
    if (features.empty() || features.size() != labels.size()) {
        throw std::invalid_argument("GaussianNB: bad training input");
    }
    const std::size_t dim = features[0].size();
    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        by_class[labels[i]].push_back(i);
    }
    classes_.clear();
    log_prior_.clear();
    mean_.clear();
    var_.clear();
    for (const auto& [label, members] : by_class) {
        classes_.push_back(label);
        log_prior_.push_back(std::log(static_cast<double>(members.size()) /
                                      static_cast<double>(labels.size())));
        std::vector<double> mean(dim, 0.0), var(dim, 0.0);
        for (std::size_t i : members) {
            for (std::size_t d = 0; d < dim; ++d) {
                mean[d] += features[i][d];
            }
        }
        for (double& m : mean) {
            m /= static_cast<double>(members.size());
        }
        for (std::size_t i : members) {
            for (std::size_t d = 0; d < dim; ++d) {
                const double delta = features[i][d] - mean[d];
                var[d] += delta * delta;
            }
        }
        for (double& v : var) {
            v = std::max(v / static_cast<double>(members.size()), 1e-9);
        }
        mean_.push_back(std::move(mean));
        var_.push_back(std::move(var));
    }
}

const std::string& GaussianNB::predict(const std::vector<double>& x) const {
    if (classes_.empty()) {
        throw std::logic_error("GaussianNB: predict before fit");
    }
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        double score = log_prior_[c];
        for (std::size_t d = 0; d < x.size(); ++d) {
            const double delta = x[d] - mean_[c][d];
            score -= 0.5 * (std::log(2.0 * M_PI * var_[c][d]) +
                            delta * delta / var_[c][d]);
        }
        if (score > best_score) {
            best_score = score;
            best = c;
        }
    }
    return classes_[best];
}

bool GaussianNB::knows(const std::string& label) const {
    return std::find(classes_.begin(), classes_.end(), label) != classes_.end();
}

double macro_f1(const std::vector<std::string>& truth,
                const std::vector<std::string>& predicted) {
    if (truth.empty() || truth.size() != predicted.size()) {
        throw std::invalid_argument("macro_f1: bad input");
    }
    std::set<std::string> classes(truth.begin(), truth.end());
    double f1_sum = 0.0;
    for (const std::string& c : classes) {
        long tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const bool is_true = truth[i] == c;
            const bool is_pred = predicted[i] == c;
            tp += is_true && is_pred;
            fp += !is_true && is_pred;
            fn += is_true && !is_pred;
        }
        const double p = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        const double r = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
        f1_sum += p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    }
    return f1_sum / static_cast<double>(classes.size());
}

double classification_f1(const std::vector<std::vector<double>>& train_features,
                         const std::vector<std::string>& train_labels,
                         const std::vector<std::vector<double>>& test_features,
                         const std::vector<std::string>& test_labels) {
    GaussianNB nb;
    nb.fit(train_features, train_labels);
    std::vector<std::string> truth, predicted;
    for (std::size_t i = 0; i < test_labels.size(); ++i) {
        if (!nb.knows(test_labels[i])) {
            std::cerr << "warning: test label '" << test_labels[i]
                      << "' absent from train set; excluded from macro F1\n";
            continue;
        }
        truth.push_back(test_labels[i]);
        predicted.push_back(nb.predict(test_features[i]));
    }
    if (truth.empty()) {
        throw std::invalid_argument("classification_f1: no test label appears in train");
    }
    return macro_f1(truth, predicted);
}

RetrievalResult retrieval_eval(const std::vector<std::vector<double>>& train_features,
                               const std::vector<std::string>& train_labels,
                               const std::vector<std::int64_t>& train_timestamps,
                               const std::vector<std::vector<double>>& test_features,
                               const std::vector<std::string>& test_labels, int k) {
    if (k <= 0) {
        throw std::invalid_argument("retrieval: k must be positive");
    }
    if (train_features.empty() || test_features.empty()) {
        throw std::invalid_argument("retrieval: empty train or test set");
    }
    const std::size_t n_train = train_features.size();
    const std::size_t k_used = std::min<std::size_t>(k, n_train);

    std::map<std::string, long> label_totals;
    for (const std::string& label : train_labels) {
        ++label_totals[label];
    }

    RetrievalResult result;
    std::vector<std::size_t> order(n_train);
    std::vector<double> sims(n_train);
    for (std::size_t t = 0; t < test_features.size(); ++t) {
        for (std::size_t i = 0; i < n_train; ++i) {
            sims[i] = cosine(test_features[t], train_features[i]);
        }
        std::iota(order.begin(), order.end(), 0);
        std::partial_sort(order.begin(), order.begin() + k_used, order.end(),
                          [&](std::size_t a, std::size_t b) {
                              if (sims[a] != sims[b]) {
                                  return sims[a] > sims[b];
                              }
                              if (train_timestamps[a] != train_timestamps[b]) {
                                  return train_timestamps[a] < train_timestamps[b];
                              }
                              return a < b;
                          });
        long relevant_retrieved = 0;
        for (std::size_t i = 0; i < k_used; ++i) {
            relevant_retrieved += train_labels[order[i]] == test_labels[t];
        }
        auto it = label_totals.find(test_labels[t]);
        const long relevant_total = it == label_totals.end() ? 0 : it->second;
        const double p = static_cast<double>(relevant_retrieved) / k_used;
        const double r = relevant_total > 0
                             ? static_cast<double>(relevant_retrieved) / relevant_total
                             : 0.0;
        result.precision += p;
        result.recall += r;
        result.f1 += p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    }
    const auto n_test = static_cast<double>(test_features.size());
    result.precision /= n_test;
    result.recall /= n_test;
    result.f1 /= n_test;
    return result;
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json j;
    j["dataset"] = dataset;
    j["seed"] = seed;
    j["schemes"] = nlohmann::json::array();
    for (const SchemeRecord& r : schemes) {
        nlohmann::json s;
        s["scheme"] = scheme_name(r.scheme);
        s["purity"] = r.purity;
        s["nmi"] = r.nmi;
        s["classification_f1"] = r.classification_f1;
        s["retrieval_f1"] = r.retrieval_f1;
        s["running_time_s"] = r.running_time_s;
        s["docs"] = r.stats.doc_count;
        s["max_words"] = r.stats.max_words;
        s["mean_words"] = r.stats.mean_words;
        if (!r.error.empty()) {
            s["error"] = r.error;
        }
        j["schemes"].push_back(s);
    }
    return j;
}

std::string EvalReport::table() const {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-13s %8s %9s %10s %7s %7s %9s %10s %9s\n",
                  "Scheme", "Docs", "MaxW/doc", "MeanW/doc", "Purity", "NMI",
                  "Classif", "Retrieval", "Time(s)");
    out << buf;
    for (const SchemeRecord& r : schemes) {
        if (!r.error.empty()) {
            std::snprintf(buf, sizeof(buf), "%-13s failed: %s\n", scheme_name(r.scheme),
                          r.error.c_str());
            out << buf;
            continue;
        }
        std::snprintf(buf, sizeof(buf),
                      "%-13s %8d %9ld %10ld %7.3f %7.3f %9.3f %10.3f %9.2f\n",
                      scheme_name(r.scheme), r.stats.doc_count, r.stats.max_words,
                      r.stats.mean_words, r.purity, r.nmi, r.classification_f1,
                      r.retrieval_f1, r.running_time_s);
        out << buf;
    }
    return out.str();
}

EvalReport run_benchmark(const Corpus& corpus, const std::vector<Scheme>& schemes,
                         const BenchConfig& config) {
    const StopwordSet& stopwords =
        config.stopwords.empty() ? default_stopwords() : config.stopwords;

    auto [train_corpus, test_corpus] = time_split(corpus, config.split);
    if (test_corpus.empty()) {
        throw std::invalid_argument("benchmark: test split is empty");
    }
    const Vocabulary vocab =
        build_vocabulary(train_corpus, stopwords, config.min_count);
    const TokenLists train_tokens = tokenize_corpus(train_corpus, stopwords);

    std::vector<std::string> train_labels, test_labels;
    std::vector<std::int64_t> train_timestamps;
    for (const Tweet& t : train_corpus.tweets()) {
        train_labels.push_back(t.query_label);
        train_timestamps.push_back(t.timestamp);
    }
    LabelAssignment test_label_assignment;
    for (const Tweet& t : test_corpus.tweets()) {
        test_labels.push_back(t.query_label);
        test_label_assignment.label_of.emplace(t.id, t.query_label);
    }

    EvalReport report;
    report.dataset = config.dataset_name;
    report.seed = config.seed;

    for (Scheme scheme : schemes) {
        SchemeRecord record;
        record.scheme = scheme;
        try {
            const auto t0 = std::chrono::steady_clock::now();
            const PooledCorpus pooled =
                pool(scheme, train_corpus, train_tokens, config.resolution,
                     derive_seed(config.seed, std::string("pool:") + scheme_name(scheme)));
            LdaConfig lda_config = config.lda;
            lda_config.seed =
                derive_seed(config.seed, std::string("lda:") + scheme_name(scheme));
            const TopicModel model = train(pooled, vocab, lda_config);
            const auto t1 = std::chrono::steady_clock::now();
            record.running_time_s = std::chrono::duration<double>(t1 - t0).count();
            record.stats = corpus_stats(pooled);

            const std::uint64_t infer_seed =
                derive_seed(config.seed, std::string("eval:") + scheme_name(scheme));
            const auto test_features = infer_features(model, test_corpus, stopwords,
                                                      config.infer_sweeps, infer_seed);
            const auto train_features = infer_features(model, train_corpus, stopwords,
                                                       config.infer_sweeps, infer_seed);

            ClusterAssignment clusters;
            for (std::size_t i = 0; i < test_corpus.size(); ++i) {
                clusters.cluster_of.emplace(test_corpus.tweets()[i].id,
                                            argmax_lowest(test_features[i]));
            }
            record.purity = purity(clusters, test_label_assignment);
            record.nmi = nmi(clusters, test_label_assignment);
            record.classification_f1 = classification_f1(train_features, train_labels,
                                                         test_features, test_labels);
            const RetrievalResult retrieval =
                retrieval_eval(train_features, train_labels, train_timestamps,
                               test_features, test_labels, config.retrieval_k);
            record.retrieval_f1 = retrieval.f1;
            record.retrieval_precision = retrieval.precision;
        } catch (const std::exception& e) {
            record.error = e.what();
        }
        report.schemes.push_back(std::move(record));
    }
    return report;
}

}  // namespace tweetpool
