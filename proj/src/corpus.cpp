#include "tweetpool/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tweetpool {

namespace {

std::string lowercase_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

bool is_word_char(unsigned char c) {
    // Bytes >= 0x80 are UTF-8 continuation/lead bytes; keep them inside tokens.
    return std::isalnum(c) != 0 || c >= 0x80;
}

void validate_tweet(const Tweet& t) {
    if (t.id.empty()) {
        throw std::invalid_argument("tweet with empty id");
    }
    if (t.reply_to && *t.reply_to == t.id) {
        throw std::invalid_argument("tweet " + t.id + " replies to itself");
    }
    if (t.retweet_of && *t.retweet_of == t.id) {
        throw std::invalid_argument("tweet " + t.id + " retweets itself");
    }
    for (const std::string& h : t.hashtags) {
        for (char c : h) {
            if (std::isspace(static_cast<unsigned char>(c)) ||
                std::isupper(static_cast<unsigned char>(c))) {
                throw std::invalid_argument("tweet " + t.id + ": hashtag '" + h +
                                            "' must be lowercase without whitespace");
            }
        }
    }
}

}  // namespace

Corpus::Corpus(std::vector<Tweet> tweets) : tweets_(std::move(tweets)) {
    std::sort(tweets_.begin(), tweets_.end(), [](const Tweet& a, const Tweet& b) {
        return std::tie(a.timestamp, a.id) < std::tie(b.timestamp, b.id);
    });
    for (std::size_t i = 0; i < tweets_.size(); ++i) {
        const Tweet& t = tweets_[i];
        validate_tweet(t);
        auto [it, inserted] = index_.emplace(t.id, i);
        if (!inserted) {
            throw std::invalid_argument("duplicate id " + t.id);
        }
        labels_.insert(t.query_label);
    }
}

const Tweet& Corpus::by_id(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        throw std::out_of_range("no tweet with id " + id);
    }
    return tweets_[it->second];
}

std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords) {
    const std::string lower = lowercase_ascii(text);
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        // A bare '#' or '@' is punctuation, not a token.
        if (!current.empty() && current != "#" && current != "@" &&
            stopwords.count(current) == 0) {
            tokens.push_back(current);
        }
        current.clear();
    };
    for (unsigned char c : lower) {
        if (c == '#' || c == '@') {
            flush();
            current.push_back(static_cast<char>(c));
        } else if (is_word_char(c)) {
            current.push_back(static_cast<char>(c));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

std::vector<std::vector<std::string>> tokenize_corpus(const Corpus& corpus,
                                                      const StopwordSet& stopwords) {
    std::vector<std::vector<std::string>> out;
    out.reserve(corpus.size());
    for (const Tweet& t : corpus.tweets()) {
        out.push_back(tokenize(t.text, stopwords));
    }
    return out;
}

const StopwordSet& default_stopwords() {
    static const StopwordSet set = {
        "a",    "about", "after", "all",   "also",  "an",    "and",  "any",   "are",
        "as",   "at",    "be",    "been",  "but",   "by",    "can",  "could", "did",
        "do",   "does",  "for",   "from",  "had",   "has",   "have", "he",    "her",
        "him",  "his",   "how",   "i",     "if",    "in",    "into", "is",    "it",
        "its",  "just",  "me",    "more",  "most",  "my",    "no",   "not",   "of",
        "on",   "one",   "only",  "or",    "other", "our",   "out",  "over",  "own",
        "rt",   "she",   "so",    "some",  "such",  "than",  "that", "the",   "their",
        "them", "then",  "there", "these", "they",  "this",  "to",   "up",    "us",
        "was",  "we",    "were",  "what",  "when",  "which", "who",  "will",  "with",
        "would", "you",  "your"};
    return set;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open stopword file " + path.string());
    }
    StopwordSet set;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty()) {
            set.insert(line);
        }
    }
    return set;
}

std::vector<Tweet> load_tweets_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::vector<Tweet> tweets;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("line " + std::to_string(lineno) +
                                     ": malformed JSON (" + e.what() + ")");
        }
        try {
            Tweet t;
            t.id = j.at("id").get<std::string>();
            t.author_id = j.at("author_id").get<std::string>();
            t.text = j.at("text").get<std::string>();
            t.timestamp = j.at("timestamp").get<std::int64_t>();
            t.query_label = j.at("query_label").get<std::string>();
            if (j.contains("hashtags") && !j["hashtags"].is_null()) {
                for (const auto& h : j["hashtags"]) {
                    t.hashtags.push_back(lowercase_ascii(h.get<std::string>()));
                }
            }
            if (j.contains("reply_to") && !j["reply_to"].is_null()) {
                t.reply_to = j["reply_to"].get<std::string>();
            }
            if (j.contains("retweet_of") && !j["retweet_of"].is_null()) {
                t.retweet_of = j["retweet_of"].get<std::string>();
            }
            if (j.contains("mentions") && !j["mentions"].is_null()) {
                for (const auto& m : j["mentions"]) {
                    t.mentions.push_back(m.get<std::string>());
                }
            }
            tweets.push_back(std::move(t));
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("line " + std::to_string(lineno) +
                                     ": bad tweet object (" + e.what() + ")");
        }
    }
    return tweets;
}

Corpus load_jsonl(const std::filesystem::path& path) {
    return Corpus(load_tweets_jsonl(path));
}

void write_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    for (const Tweet& t : corpus.tweets()) {
        nlohmann::json j;
        j["id"] = t.id;
        j["author_id"] = t.author_id;
        j["text"] = t.text;
        j["timestamp"] = t.timestamp;
        j["query_label"] = t.query_label;
        j["hashtags"] = t.hashtags;
        j["reply_to"] = t.reply_to ? nlohmann::json(*t.reply_to) : nlohmann::json(nullptr);
        j["retweet_of"] =
            t.retweet_of ? nlohmann::json(*t.retweet_of) : nlohmann::json(nullptr);
        j["mentions"] = t.mentions;
        out << j.dump() << '\n';
    }
}

Corpus dedupe_multilabel(std::vector<Tweet> tweets) {
    std::unordered_map<std::string, std::set<std::string>> labels_by_id;
    for (const Tweet& t : tweets) {
        labels_by_id[t.id].insert(t.query_label);
    }
    std::vector<Tweet> kept;
    std::unordered_set<std::string> seen;
    for (Tweet& t : tweets) {
        if (labels_by_id[t.id].size() > 1) {
            continue;  // conflicting labels: drop the id entirely
        }
        if (seen.insert(t.id).second) {
            kept.push_back(std::move(t));
        }
    }
    return Corpus(std::move(kept));
}

std::pair<Corpus, Corpus> time_split(const Corpus& corpus, double train_fraction) {
    if (corpus.empty()) {
        throw std::invalid_argument("time_split: corpus is empty");
    }
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("time_split: train_fraction must be in (0,1)");
    }
    const std::size_t n = corpus.size();
    auto boundary = static_cast<std::size_t>(
        std::ceil(train_fraction * static_cast<double>(n)));
    boundary = std::min(boundary, n);
    std::vector<Tweet> train(corpus.tweets().begin(), corpus.tweets().begin() + boundary);
    std::vector<Tweet> test(corpus.tweets().begin() + boundary, corpus.tweets().end());
    return {Corpus(std::move(train)), Corpus(std::move(test))};
}

int Vocabulary::add(const std::string& token, long count) {
    auto it = index_.find(token);
    if (it != index_.end()) {
        counts_[it->second] += count;
        return it->second;
    }
    const int idx = static_cast<int>(tokens_.size());
    tokens_.push_back(token);
    counts_.push_back(count);
    index_.emplace(token, idx);
    return idx;
}

std::optional<int> Vocabulary::index_of(const std::string& token) const {
    auto it = index_.find(token);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Vocabulary build_vocabulary(const Corpus& corpus, const StopwordSet& stopwords,
                            int min_count) {
    if (min_count < 1) {
        throw std::invalid_argument("build_vocabulary: min_count must be >= 1");
    }
    const auto token_lists = tokenize_corpus(corpus, stopwords);
    std::unordered_map<std::string, long> freq;
    for (const auto& tokens : token_lists) {
        for (const auto& tok : tokens) {
            ++freq[tok];
        }
    }
    Vocabulary vocab;
    for (const auto& tokens : token_lists) {
        for (const auto& tok : tokens) {
            if (freq[tok] >= min_count) {
                vocab.add(tok);
            }
        }
    }
    return vocab;
}

}  // namespace tweetpool
