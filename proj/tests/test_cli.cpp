#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "helpers.hpp"
#include "tweetpool/corpus.hpp"
#include "tweetpool/lda.hpp"
#include "tweetpool/pooling.hpp"
#include "tweetpool/synth.hpp"

using namespace tweetpool;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs the real CLI binary with output capture.
RunResult run_cli(const std::string& args, const std::filesystem::path& dir) {
    const auto out_path = dir / "stdout.txt";
    const auto err_path = dir / "stderr.txt";
    const std::string cmd = std::string("\"") + TWEETPOOL_CLI_PATH + "\" " + args +
                            " > \"" + out_path.string() + "\" 2> \"" +
                            err_path.string() + "\"";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = (status >= 0 && (status & 0x7f) == 0) ? (status >> 8) & 0xff : -1;
    r.out = testutil::read_file(out_path);
    r.err = testutil::read_file(err_path);
    return r;
}

std::string q(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("generate writes a loadable corpus and ground truth") {
    testutil::TempDir dir;
    const auto corpus_path = dir.path() / "corpus.jsonl";
    const auto truth_path = dir.path() / "truth.json";
    const std::string flags =
        " --communities 2 --users-per-community 5 --synth-topics 2"
        " --topics-per-community 1 --tweets-per-user 4 --seed 9";
    const RunResult r = run_cli("generate --out " + q(corpus_path) +
                                    " --truth-out " + q(truth_path) + flags,
                                dir.path());
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("wrote") != std::string::npos);

    const Corpus corpus = load_jsonl(corpus_path);
    CHECK(corpus.size() >= 40);
    const GroundTruth truth = GroundTruth::load(truth_path);
    CHECK(truth.user_community.size() == 10);
    for (const Tweet& t : corpus.tweets()) {
        CHECK(truth.tweet_label.at(t.id) == t.query_label);
    }

    SUBCASE("default parameters yield 100 users") {
        const auto c = dir.path() / "default_corpus.jsonl";
        const auto t = dir.path() / "default_truth.json";
        const RunResult rd =
            run_cli("generate --out " + q(c) + " --truth-out " + q(t), dir.path());
        REQUIRE(rd.exit_code == 0);
        CHECK(GroundTruth::load(t).user_community.size() == 100);
    }

    SUBCASE("repeating the seed reproduces both files byte for byte") {
        const auto corpus2 = dir.path() / "corpus2.jsonl";
        const auto truth2 = dir.path() / "truth2.json";
        const RunResult r2 = run_cli("generate --out " + q(corpus2) +
                                         " --truth-out " + q(truth2) + flags,
                                     dir.path());
        REQUIRE(r2.exit_code == 0);
        CHECK(testutil::read_file(corpus2) == testutil::read_file(corpus_path));
        CHECK(testutil::read_file(truth2) == testutil::read_file(truth_path));
    }
}

TEST_CASE("pool prints stats matching the library and exports artifacts") {
    testutil::TempDir dir;
    const auto corpus_path = dir.path() / "corpus.jsonl";
    SynthParams params;
    params.communities = 2;
    params.users_per_community = 5;
    params.topics = 2;
    params.topics_per_community = 1;
    params.tweets_per_user = 5;
    params.seed = 17;
    const SynthData data = generate(params);
    write_jsonl(data.corpus, corpus_path);

    const auto tokens = tokenize_corpus(data.corpus, default_stopwords());
    const PoolStats expected =
        corpus_stats(pool(Scheme::Author, data.corpus, tokens, 1.0, 0));

    const auto graph_path = dir.path() / "graph.txt";
    const auto part_path = dir.path() / "partition.txt";
    const RunResult r =
        run_cli("pool --input " + q(corpus_path) + " --scheme author --graph-out " +
                    q(graph_path) + " --partition-out " + q(part_path),
                dir.path());
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);
    const std::string want = "author: docs=" + std::to_string(expected.doc_count) +
                             " max_words=" + std::to_string(expected.max_words) +
                             " mean_words=" + std::to_string(expected.mean_words);
    CHECK(r.out.find(want) != std::string::npos);
    CHECK(std::filesystem::exists(graph_path));
    CHECK(std::filesystem::exists(part_path));
    CHECK_FALSE(testutil::read_file(part_path).empty());
}

TEST_CASE("train then eval round trip through the model file") {
    testutil::TempDir dir;
    const auto corpus_path = dir.path() / "corpus.jsonl";
    SynthParams params;
    params.communities = 2;
    params.users_per_community = 6;
    params.topics = 2;
    params.topics_per_community = 1;
    params.tweets_per_user = 8;
    params.seed = 5;
    write_jsonl(generate(params).corpus, corpus_path);

    const auto model_path = dir.path() / "model.json";
    const RunResult t = run_cli(
        "train --input " + q(corpus_path) +
            " --scheme community --topics 2 --alpha 0.5 --iterations 60 --seed 3" +
            " --model-out " + q(model_path),
        dir.path());
    CAPTURE(t.err);
    REQUIRE(t.exit_code == 0);
    CHECK(t.out.find("K=2") != std::string::npos);

    const TopicModel model = TopicModel::load(model_path);
    CHECK(model.K == 2);
    CHECK(model.D >= 1);

    const RunResult e = run_cli("eval --input " + q(corpus_path) + " --model " +
                                    q(model_path) + " --sweeps 10 --seed 3",
                                dir.path());
    CAPTURE(e.err);
    REQUIRE(e.exit_code == 0);
    CHECK(e.out.find("purity=") != std::string::npos);
    CHECK(e.out.find("nmi=") != std::string::npos);
}

TEST_CASE("bench runs every scheme and writes the report") {
    testutil::TempDir dir;
    const auto corpus_path = dir.path() / "corpus.jsonl";
    SynthParams params;
    params.communities = 2;
    params.users_per_community = 6;
    params.topics = 2;
    params.topics_per_community = 1;
    params.tweets_per_user = 8;
    params.hashtag_rate = 0.4;
    params.reply_rate = 0.3;
    params.seed = 13;
    write_jsonl(generate(params).corpus, corpus_path);

    const auto report_path = dir.path() / "report.json";
    const std::string cmd =
        "bench --input " + q(corpus_path) + " --schemes all" +
        " --topics 2 --alpha 0.5 --iterations 40 --sweeps 10 --seed 4" +
        " --dataset-name synthetic --out " + q(report_path);
    const RunResult r = run_cli(cmd, dir.path());
    CAPTURE(r.err);
    CAPTURE(r.out);
    REQUIRE(r.exit_code == 0);

    const auto report = nlohmann::json::parse(testutil::read_file(report_path));
    CHECK(report["dataset"] == "synthetic");
    CHECK(report["seed"] == 4);
    REQUIRE(report["schemes"].size() == 6);
    const std::vector<std::string> order = {"unpooled",     "author",  "hashtag",
                                            "conversation", "network", "community"};
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& rec = report["schemes"][i];
        CHECK(rec["scheme"] == order[i]);
        CHECK_FALSE(rec.contains("error"));
        CHECK(rec["purity"].get<double>() >= 0.0);
        CHECK(rec["docs"].get<long>() >= 1);
        CHECK(rec.contains("running_time_s"));
        CHECK(rec.contains("max_words"));
        CHECK(rec.contains("mean_words"));
    }

    SUBCASE("identical invocations match byte for byte modulo timing") {
        const auto report2_path = dir.path() / "report2.json";
        const std::string cmd2 =
            "bench --input " + q(corpus_path) + " --schemes all" +
            " --topics 2 --alpha 0.5 --iterations 40 --sweeps 10 --seed 4" +
            " --dataset-name synthetic --out " + q(report2_path);
        const RunResult r2 = run_cli(cmd2, dir.path());
        REQUIRE(r2.exit_code == 0);
        auto a = nlohmann::json::parse(testutil::read_file(report_path));
        auto b = nlohmann::json::parse(testutil::read_file(report2_path));
        for (auto* j : {&a, &b}) {
            for (auto& rec : (*j)["schemes"]) {
                rec["running_time_s"] = 0.0;
            }
        }
        CHECK(a.dump(2) == b.dump(2));
    }
}

TEST_CASE("exit codes distinguish usage, validation and runtime errors") {
    testutil::TempDir dir;
    SUBCASE("missing subcommand fails") {
        CHECK(run_cli("", dir.path()).exit_code != 0);
    }
    SUBCASE("unknown scheme is a validation error (exit 1)") {
        const auto corpus_path = dir.path() / "corpus.jsonl";
        SynthParams params;
        params.communities = 1;
        params.users_per_community = 2;
        params.topics = 1;
        params.topics_per_community = 1;
        params.tweets_per_user = 2;
        write_jsonl(generate(params).corpus, corpus_path);
        const RunResult r = run_cli(
            "pool --input " + q(corpus_path) + " --scheme bogus", dir.path());
        CHECK(r.exit_code == 1);
        CHECK(r.err.find("error:") != std::string::npos);
    }
    SUBCASE("unreadable input is a runtime error (exit 2)") {
        const RunResult r = run_cli(
            "pool --input " + q(dir.path() / "nope.jsonl") + " --scheme author",
            dir.path());
        CHECK(r.exit_code == 2);
    }
    SUBCASE("malformed jsonl names the line (exit 2)") {
        const auto bad = dir.path() / "bad.jsonl";
        std::ofstream(bad) << "{\"id\":\"t1\",\"author_id\":\"u\",\"text\":\"x\","
                              "\"timestamp\":1,\"query_label\":\"q\"}\nnot json\n";
        const RunResult r =
            run_cli("pool --input " + q(bad) + " --scheme author", dir.path());
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("line 2") != std::string::npos);
    }
}
