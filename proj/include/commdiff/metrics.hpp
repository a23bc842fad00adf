#ifndef COMMDIFF_METRICS_HPP
#define COMMDIFF_METRICS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "commdiff/exec.hpp"
#include "commdiff/sentiment.hpp"
#include "commdiff/types.hpp"

namespace commdiff {

// Logarithm applied to retweet and follower magnitudes. The default is
// ln(1 + x), which keeps zero counts well-defined; the shift and base are
// configurable for sensitivity runs.
struct LogConvention {
    bool shift = true;
    bool base10 = false;

    double apply(double x) const;
};

// citations / (current_year - year); citations itself when the years match.
double academic_impact(const Article& article, int current_year);

// One linked, scored tweet as the impact formulas see it.
struct LinkedTweetView {
    double sentiment_score = 0.0;
    std::int64_t retweet_count = 0;
    const std::string* user_id = nullptr;
    std::int64_t user_followers = 0;
};

// Mean over linked tweets of |score| * log(1 + retweets); 0 with no tweets.
double social_sentiment_impact(std::span<const LinkedTweetView> tweets,
                               const LogConvention& log_conv = {});

// log(1 + sum of follower counts over unique users); each user counts once
// with the maximum follower value observed. 0 with no users.
double social_user_impact(std::span<const LinkedTweetView> tweets,
                          const LogConvention& log_conv = {});

struct ImpactScores {
    std::string article_id;
    std::optional<double> academic;  // absent when the article has no citation count
    double social_sentiment = 0.0;
    double social_user = 0.0;
    std::int64_t tweet_count = 0;  // m
    std::int64_t user_count = 0;   // unique users
};

// Per-article impact table in corpus article order. `sentiments` must be
// aligned with corpus.tweets. Articles without citations get no academic
// score; articles without mentions get social scores 0.
std::vector<ImpactScores> compute_impact_table(const Corpus& corpus,
                                               const std::vector<SentimentScore>& sentiments,
                                               int current_year,
                                               const LogConvention& log_conv = {},
                                               Exec exec = Exec::parallel);

struct ConcernScores {
    int topic_index = 0;
    double aca_con = 0.0;
    bool social_defined = false;  // false when the topic has no articles
    double soc_articles_con = 0.0;
    double soc_tweet_con = 0.0;
    double soc_user_con = 0.0;
    std::int64_t n_articles_topic = 0;
    std::int64_t n_tweets_topic = 0;
    std::int64_t n_users_topic = 0;
};

// Per-topic concern scores from a one-topic-per-article assignment.
// Tweets and users deduplicate within a topic: a tweet mentioning two
// articles of the same topic counts once there, once more in any other
// topic it touches.
std::vector<ConcernScores> concern_scores(std::span<const int> article_topics, int k,
                                          const Corpus& corpus);

struct SocialTopicConcern {
    int topic_index = 0;
    double social_con = 0.0;
    std::int64_t n_tweets_topic = 0;
};

// Share of tweets per topic over a one-topic-per-tweet assignment.
std::vector<SocialTopicConcern> social_topic_concern(std::span<const int> tweet_topics, int k);

}  // namespace commdiff

#endif
