#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tweetpool/corpus.hpp"
#include "tweetpool/lda.hpp"
#include "tweetpool/pooling.hpp"

namespace tweetpool {

struct ClusterAssignment {
    std::map<std::string, int> cluster_of;  // tweet id -> dense cluster index
};

struct LabelAssignment {
    std::map<std::string, std::string> label_of;  // tweet id -> query label
};

// Per-tweet fold-in inference followed by argmax (ties to the lowest topic
// index). Per-tweet sub-seeds are derived from the tweet id so the result is
// independent of evaluation order.
ClusterAssignment assign_clusters(const TopicModel& model, const Corpus& tweets,
                                  const StopwordSet& stopwords, int sweeps,
                                  std::uint64_t seed);

// Fraction of tweets belonging to their cluster's majority label.
double purity(const ClusterAssignment& clusters, const LabelAssignment& labels);

// 2 I(T,Q) / (H(T) + H(Q)) with natural logarithms. When both entropies are
// zero the partitions are compared directly (equal -> 1); a single zero
// entropy yields 0 via I = 0.
double nmi(const ClusterAssignment& clusters, const LabelAssignment& labels);

// Core NMI over two aligned integer assignments (also used to compare a
// detected community partition against a planted one).
double nmi_assignments(const std::vector<int>& a, const std::vector<int>& b);

// Gaussian naive Bayes over dense feature vectors.
class GaussianNB {
public:
    void fit(const std::vector<std::vector<double>>& features,
             const std::vector<std::string>& labels);
    const std::string& predict(const std::vector<double>& x) const;
    bool knows(const std::string& label) const;

private:
    std::vector<std::string> classes_;
    std::vector<double> log_prior_;
    std::vector<std::vector<double>> mean_;
    std::vector<std::vector<double>> var_;  // floored at 1e-9
};

// Macro-averaged F1 over the distinct true labels.
double macro_f1(const std::vector<std::string>& truth,
                const std::vector<std::string>& predicted);

// Fits Gaussian NB on train features and macro-averages F1 on the test set.
// Test classes absent from the train set are excluded from the average.
double classification_f1(const std::vector<std::vector<double>>& train_features,
                         const std::vector<std::string>& train_labels,
                         const std::vector<std::vector<double>>& test_features,
                         const std::vector<std::string>& test_labels);

struct RetrievalResult {
    double precision = 0.0;  // macro precision@k
    double recall = 0.0;     // macro recall@k
    double f1 = 0.0;         // macro F1
};

// Every test vector queries the train set by cosine similarity; the top k
// train tweets are retrieved (similarity ties resolved by earlier
// timestamp). A retrieved tweet is relevant when its label matches.
RetrievalResult retrieval_eval(const std::vector<std::vector<double>>& train_features,
                               const std::vector<std::string>& train_labels,
                               const std::vector<std::int64_t>& train_timestamps,
                               const std::vector<std::vector<double>>& test_features,
                               const std::vector<std::string>& test_labels, int k);

struct SchemeRecord {
    Scheme scheme = Scheme::Unpooled;
    double purity = 0.0;
    double nmi = 0.0;
    double classification_f1 = 0.0;
    double retrieval_f1 = 0.0;
    double retrieval_precision = 0.0;  // not serialized; used by trend checks
    double running_time_s = 0.0;       // pooling + training only
    PoolStats stats;
    std::string error;  // non-empty when the scheme failed
};

struct EvalReport {
    std::string dataset;
    std::uint64_t seed = 0;
    std::vector<SchemeRecord> schemes;

    nlohmann::json to_json() const;
    std::string table() const;  // human-readable results table
};

struct BenchConfig {
    LdaConfig lda;
    double split = 0.8;
    double resolution = 1.0;
    int infer_sweeps = 30;
    int retrieval_k = 10;
    int min_count = 1;
    StopwordSet stopwords;  // empty -> default list
    std::uint64_t seed = 0;
    std::string dataset_name = "corpus";
};

// The full evaluation pipeline per scheme: time split, pooling, LDA training
// (wall time covers pooling + training), then the four metrics on the test
// set. A failing scheme is recorded in its record and the rest continue.
EvalReport run_benchmark(const Corpus& corpus, const std::vector<Scheme>& schemes,
                         const BenchConfig& config);

}  // namespace tweetpool
