#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace tweetpool {

// One microblog post. reply_to / retweet_of reference other tweet ids and
// may point outside the loaded corpus.
struct Tweet {
    std::string id;
    std::string author_id;
    std::string text;
    std::int64_t timestamp = 0;  // unix seconds
    std::string query_label;
    std::vector<std::string> hashtags;  // lowercase, no whitespace
    std::optional<std::string> reply_to;
    std::optional<std::string> retweet_of;
    std::vector<std::string> mentions;
};

// Immutable, timestamp-ordered collection of tweets with unique ids.
class Corpus {
public:
    Corpus() = default;
    // Sorts by (timestamp, id) and validates invariants (unique ids,
    // no self reply/retweet references, lowercase hashtags).
    explicit Corpus(std::vector<Tweet> tweets);

    const std::vector<Tweet>& tweets() const { return tweets_; }
    const std::set<std::string>& label_set() const { return labels_; }
    std::size_t size() const { return tweets_.size(); }
    bool empty() const { return tweets_.empty(); }

    bool contains(const std::string& id) const { return index_.count(id) != 0; }
    const Tweet& by_id(const std::string& id) const;

private:
    std::vector<Tweet> tweets_;
    std::set<std::string> labels_;
    std::unordered_map<std::string, std::size_t> index_;
};

using StopwordSet = std::unordered_set<std::string>;

// Lowercases and splits on non-alphanumeric boundaries; '#' and '@' are kept
// as token prefixes so hashtags and mentions survive as single tokens.
// Stopwords and empty tokens are dropped, order preserved.
std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords);

// Token lists aligned with corpus.tweets() order.
std::vector<std::vector<std::string>> tokenize_corpus(const Corpus& corpus,
                                                      const StopwordSet& stopwords);

// Built-in English stopword list (same content as data/stopwords_en.txt).
const StopwordSet& default_stopwords();

// One token per line, UTF-8.
StopwordSet load_stopwords(const std::filesystem::path& path);

// Parses one JSON object per line into tweets. Malformed lines raise an
// error naming the line number. Does not check id uniqueness.
std::vector<Tweet> load_tweets_jsonl(const std::filesystem::path& path);

// Strict load: parses and builds a Corpus (duplicate id -> error naming it).
Corpus load_jsonl(const std::filesystem::path& path);

// Writes the corpus back out, one JSON object per line, in corpus order.
void write_jsonl(const Corpus& corpus, const std::filesystem::path& path);

// Removes every id that appears under two or more distinct query labels;
// exact repeats under one label collapse to a single tweet.
Corpus dedupe_multilabel(std::vector<Tweet> tweets);

// First ceil(train_fraction * n) tweets by (timestamp, id) go to train.
std::pair<Corpus, Corpus> time_split(const Corpus& corpus, double train_fraction);

// Dense token index, assigned in first-occurrence order.
class Vocabulary {
public:
    int add(const std::string& token, long count = 1);  // inserts or bumps count
    std::optional<int> index_of(const std::string& token) const;
    const std::string& token_at(int index) const { return tokens_.at(index); }
    long count_at(int index) const { return counts_.at(index); }
    int size() const { return static_cast<int>(tokens_.size()); }

private:
    std::vector<std::string> tokens_;
    std::vector<long> counts_;
    std::unordered_map<std::string, int> index_;
};

// Tokens with corpus frequency >= min_count, indexed in first-occurrence order.
Vocabulary build_vocabulary(const Corpus& corpus, const StopwordSet& stopwords,
                            int min_count = 1);

}  // namespace tweetpool
