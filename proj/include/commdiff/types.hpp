#ifndef COMMDIFF_TYPES_HPP
#define COMMDIFF_TYPES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace commdiff {

// One research publication. `body` holds the text used for modeling:
// title and abstract concatenated at load time.
struct Article {
    std::string id;
    std::string title;
    std::string body;
    int year = 0;
    std::optional<std::int64_t> citations;
    std::optional<double> altmetric_score;
};

// One social post. `article_ids` are raw references as loaded, resolved
// against the article set only by link_and_stats().
struct Tweet {
    std::string id;
    std::string text;
    std::int64_t retweet_count = 0;
    std::string user_id;
    std::int64_t user_followers = 0;
    std::vector<std::string> article_ids;
};

using ArticleSet = std::vector<Article>;  // ids unique, file order preserved
using TweetSet = std::vector<Tweet>;

struct Corpus {
    ArticleSet articles;
    TweetSet tweets;
    // article id -> tweet ids mentioning it, tweet file order.
    std::map<std::string, std::vector<std::string>> mention_index;
    // (tweet id, unknown article id), excluded from the index.
    std::vector<std::pair<std::string, std::string>> unresolved_refs;

    // positional lookups, filled by link_and_stats
    std::unordered_map<std::string, std::size_t> article_pos;
    std::unordered_map<std::string, std::size_t> tweet_pos;

    const Article& article(const std::string& id) const { return articles[article_pos.at(id)]; }
    const Tweet& tweet(const std::string& id) const { return tweets[tweet_pos.at(id)]; }
};

struct CoverageReport {
    std::size_t n_articles = 0;
    std::size_t n_tweets = 0;
    std::size_t n_articles_with_citations = 0;
    std::size_t n_articles_mentioned = 0;
    double pct_mentioned = 0.0;  // 100 * mentioned / articles, 0 when no articles
    std::size_t n_unique_users = 0;
};

}  // namespace commdiff

#endif
