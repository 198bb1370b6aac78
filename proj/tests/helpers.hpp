#pragma once

#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "tweetpool/corpus.hpp"

namespace testutil {

inline tweetpool::Tweet make_tweet(std::string id, std::string author, std::string text,
                                   std::int64_t timestamp, std::string label = "q",
                                   std::optional<std::string> reply_to = std::nullopt,
                                   std::optional<std::string> retweet_of = std::nullopt) {
    tweetpool::Tweet t;
    t.id = std::move(id);
    t.author_id = std::move(author);
    t.text = std::move(text);
    t.timestamp = timestamp;
    t.query_label = std::move(label);
    t.reply_to = std::move(reply_to);
    t.retweet_of = std::move(retweet_of);
    return t;
}

// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0;; ++i) {
            path_ = base / ("tweetpool_test_" + std::to_string(::getpid()) + "_" +
                            std::to_string(i));
            if (std::filesystem::create_directory(path_)) {
                break;
            }
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

}  // namespace testutil
