#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tweetpool/community.hpp"
#include "tweetpool/corpus.hpp"
#include "tweetpool/eval.hpp"
#include "tweetpool/graph.hpp"
#include "tweetpool/lda.hpp"
#include "tweetpool/pooling.hpp"
#include "tweetpool/rng.hpp"
#include "tweetpool/synth.hpp"

namespace tp = tweetpool;

namespace {

// Flags shared by subcommands that need a corpus + LDA setup.
struct CommonOptions {
    std::string input;
    std::string stopwords_path;
    int topics = 10;
    double alpha = 0.0;  // 0 -> 50/K
    double beta = 0.01;
    int iterations = 1000;
    int ll_every = 1;
    double split = 0.8;
    double resolution = 1.0;
    int infer_sweeps = 30;
    int retrieval_k = 10;
    std::uint64_t seed = 0;
};

tp::StopwordSet resolve_stopwords(const std::string& path) {
    if (path.empty()) {
        return tp::default_stopwords();
    }
    return tp::load_stopwords(path);
}

tp::Corpus load_corpus(const std::string& path) {
    // Multi-label duplicates are removed up front, as in the evaluation
    // protocol; exact duplicates collapse.
    return tp::dedupe_multilabel(tp::load_tweets_jsonl(path));
}

tp::LdaConfig lda_config_from(const CommonOptions& opt) {
    tp::LdaConfig config;
    config.topics = opt.topics;
    config.alpha = opt.alpha;
    config.beta = opt.beta;
    config.iterations = opt.iterations;
    config.ll_every = opt.ll_every;
    config.seed = tp::derive_seed(opt.seed, "lda");
    return config;
}

std::vector<tp::Scheme> parse_schemes(const std::vector<std::string>& names) {
    std::vector<tp::Scheme> schemes;
    for (const std::string& name : names) {
        if (name == "all") {
            return tp::all_schemes();
        }
        schemes.push_back(tp::parse_scheme(name));
    }
    if (schemes.empty()) {
        schemes = tp::all_schemes();
    }
    return schemes;
}

void add_lda_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--topics", opt.topics, "Number of LDA topics")->check(CLI::Range(1, 10000));
    cmd->add_option("--alpha", opt.alpha, "Document-topic prior (0 = 50/K)");
    cmd->add_option("--beta", opt.beta, "Topic-word prior");
    cmd->add_option("--iterations", opt.iterations, "Gibbs sweeps");
    cmd->add_option("--ll-every", opt.ll_every,
                    "Record log-likelihood every N sweeps (0 = never)");
}

int cmd_generate(const tp::SynthParams& params, const std::string& out,
                 const std::string& truth_out) {
    const tp::SynthData data = tp::generate(params);
    tp::write_jsonl(data.corpus, out);
    data.truth.save(truth_out);
    std::cout << "wrote " << data.corpus.size() << " tweets to " << out << " ("
              << data.truth.user_community.size() << " users), ground truth to "
              << truth_out << "\n";
    return 0;
}

int cmd_pool(const CommonOptions& opt, const std::string& scheme_name,
             const std::string& graph_out, const std::string& partition_out) {
    const tp::Corpus corpus = load_corpus(opt.input);
    const tp::StopwordSet stopwords = resolve_stopwords(opt.stopwords_path);
    const auto tokens = tp::tokenize_corpus(corpus, stopwords);
    const tp::Scheme scheme = tp::parse_scheme(scheme_name);

    if (!graph_out.empty() || !partition_out.empty()) {
        const tp::RetweetGraph rg = tp::build_retweet_graph(corpus);
        if (!graph_out.empty()) {
            rg.graph.save_edge_list(graph_out);
        }
        if (!partition_out.empty()) {
            const tp::LouvainResult lr = tp::louvain(
                rg.graph, opt.resolution, tp::derive_seed(opt.seed, "louvain"));
            tp::save_partition(lr.partition, partition_out);
        }
    }

    const tp::PooledCorpus pooled =
        tp::pool(scheme, corpus, tokens, opt.resolution, opt.seed);
    const tp::PoolStats stats = tp::corpus_stats(pooled);
    std::cout << scheme_name << ": docs=" << stats.doc_count
              << " max_words=" << stats.max_words << " mean_words=" << stats.mean_words
              << "\n";
    return 0;
}

int cmd_train(const CommonOptions& opt, const std::string& scheme_name,
              const std::string& model_out) {
    const tp::Corpus corpus = load_corpus(opt.input);
    const tp::StopwordSet stopwords = resolve_stopwords(opt.stopwords_path);
    const auto tokens = tp::tokenize_corpus(corpus, stopwords);
    const tp::Vocabulary vocab = tp::build_vocabulary(corpus, stopwords);
    const tp::PooledCorpus pooled =
        tp::pool(tp::parse_scheme(scheme_name), corpus, tokens, opt.resolution, opt.seed);
    const tp::TopicModel model = tp::train(pooled, vocab, lda_config_from(opt));
    model.save(model_out);
    std::cout << "trained " << scheme_name << " model: K=" << model.K
              << " V=" << model.V << " D=" << model.D << " tokens=" << model.total_tokens
              << (model.ll_history.empty()
                      ? std::string()
                      : " final_ll=" + std::to_string(model.ll_history.back()))
              << "; saved to " << model_out << "\n";
    return 0;
}

int cmd_eval(const CommonOptions& opt, const std::string& model_path) {
    const tp::Corpus corpus = load_corpus(opt.input);
    const tp::StopwordSet stopwords = resolve_stopwords(opt.stopwords_path);
    const tp::TopicModel model = tp::TopicModel::load(model_path);
    auto [train_corpus, test_corpus] = tp::time_split(corpus, opt.split);

    const tp::ClusterAssignment clusters = tp::assign_clusters(
        model, test_corpus, stopwords, opt.infer_sweeps, tp::derive_seed(opt.seed, "eval"));
    tp::LabelAssignment labels;
    for (const tp::Tweet& t : test_corpus.tweets()) {
        labels.label_of.emplace(t.id, t.query_label);
    }
    std::cout << "purity=" << tp::purity(clusters, labels)
              << " nmi=" << tp::nmi(clusters, labels) << " (test tweets="
              << test_corpus.size() << ")\n";
    return 0;
}

int cmd_bench(const CommonOptions& opt, const std::vector<std::string>& scheme_names,
              const std::string& out, const std::string& dataset_name) {
    const tp::Corpus corpus = load_corpus(opt.input);
    tp::BenchConfig config;
    config.lda = lda_config_from(opt);
    config.lda.seed = 0;  // run_benchmark derives per-scheme seeds itself
    config.split = opt.split;
    config.resolution = opt.resolution;
    config.infer_sweeps = opt.infer_sweeps;
    config.retrieval_k = opt.retrieval_k;
    config.stopwords = resolve_stopwords(opt.stopwords_path);
    config.seed = opt.seed;
    config.dataset_name = dataset_name;

    const tp::EvalReport report =
        tp::run_benchmark(corpus, parse_schemes(scheme_names), config);
    std::cout << report.table();
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) {
            throw std::runtime_error("cannot write " + out);
        }
        f << report.to_json().dump(2) << '\n';
        std::cout << "report written to " << out << "\n";
    }
    for (const tp::SchemeRecord& r : report.schemes) {
        if (!r.error.empty()) {
            return 2;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tweet pooling strategies for LDA topic modeling"};
    app.require_subcommand(1);

    CommonOptions opt;
    tp::SynthParams synth_params;

    // generate
    auto* generate = app.add_subcommand("generate", "Generate a synthetic labeled corpus");
    std::string gen_out = "corpus.jsonl";
    std::string gen_truth = "ground_truth.json";
    generate->add_option("--out", gen_out, "Corpus JSONL output path");
    generate->add_option("--truth-out", gen_truth, "Ground-truth JSON output path");
    generate->add_option("--communities", synth_params.communities);
    generate->add_option("--users-per-community", synth_params.users_per_community);
    generate->add_option("--synth-topics", synth_params.topics);
    generate->add_option("--topics-per-community", synth_params.topics_per_community);
    generate->add_option("--vocab-per-topic", synth_params.vocab_per_topic);
    generate->add_option("--tweets-per-user", synth_params.tweets_per_user);
    generate->add_option("--tweet-length", synth_params.tweet_length);
    generate->add_option("--p-retweet-in", synth_params.p_retweet_in);
    generate->add_option("--p-retweet-out", synth_params.p_retweet_out);
    generate->add_option("--vocab-overlap", synth_params.vocab_overlap);
    generate->add_option("--hashtag-rate", synth_params.hashtag_rate);
    generate->add_option("--reply-rate", synth_params.reply_rate);
    generate->add_option("--mention-rate", synth_params.mention_rate);
    generate->add_option("--seed", synth_params.seed);

    // pool
    auto* pool = app.add_subcommand("pool", "Pool a corpus and print document stats");
    std::string pool_scheme = "community";
    std::string graph_out, partition_out;
    pool->add_option("--input", opt.input, "Corpus JSONL")->required();
    pool->add_option("--scheme", pool_scheme,
                     "unpooled|author|hashtag|conversation|network|community");
    pool->add_option("--stopwords", opt.stopwords_path, "Stopword file (one per line)");
    pool->add_option("--resolution", opt.resolution, "Louvain resolution");
    pool->add_option("--seed", opt.seed);
    pool->add_option("--graph-out", graph_out, "Export the retweet graph edge list");
    pool->add_option("--partition-out", partition_out, "Export the Louvain partition");

    // train
    auto* train = app.add_subcommand("train", "Train an LDA model on a pooled corpus");
    std::string train_scheme = "community";
    std::string model_out = "model.json";
    train->add_option("--input", opt.input, "Corpus JSONL")->required();
    train->add_option("--scheme", train_scheme);
    train->add_option("--stopwords", opt.stopwords_path);
    train->add_option("--resolution", opt.resolution);
    train->add_option("--seed", opt.seed);
    train->add_option("--model-out", model_out, "Model output path");
    add_lda_flags(train, opt);

    // eval
    auto* eval = app.add_subcommand("eval", "Cluster-quality metrics of a saved model");
    std::string model_path;
    eval->add_option("--input", opt.input, "Corpus JSONL")->required();
    eval->add_option("--model", model_path, "Saved model")->required();
    eval->add_option("--stopwords", opt.stopwords_path);
    eval->add_option("--split", opt.split, "Train fraction");
    eval->add_option("--sweeps", opt.infer_sweeps, "Fold-in sweeps per tweet");
    eval->add_option("--seed", opt.seed);

    // bench
    auto* bench = app.add_subcommand(
        "bench", "Run all schemes end to end and write a report");
    std::vector<std::string> scheme_names;
    std::string report_out = "report.json";
    std::string dataset_name = "corpus";
    bench->add_option("--input", opt.input, "Corpus JSONL")->required();
    bench->add_option("--schemes", scheme_names,
                      "Schemes to run (default: all)");
    bench->add_option("--stopwords", opt.stopwords_path);
    bench->add_option("--split", opt.split, "Train fraction");
    bench->add_option("--resolution", opt.resolution);
    bench->add_option("--sweeps", opt.infer_sweeps, "Fold-in sweeps per tweet");
    bench->add_option("--k", opt.retrieval_k, "Retrieval cutoff");
    bench->add_option("--seed", opt.seed);
    bench->add_option("--out", report_out, "Report JSON path");
    bench->add_option("--dataset-name", dataset_name, "Name echoed in the report");
    add_lda_flags(bench, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            return cmd_generate(synth_params, gen_out, gen_truth);
        }
        if (pool->parsed()) {
            return cmd_pool(opt, pool_scheme, graph_out, partition_out);
        }
        if (train->parsed()) {
            return cmd_train(opt, train_scheme, model_out);
        }
        if (eval->parsed()) {
            return cmd_eval(opt, model_path);
        }
        if (bench->parsed()) {
            return cmd_bench(opt, scheme_names, report_out, dataset_name);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
