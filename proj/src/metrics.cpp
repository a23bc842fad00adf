#include "commdiff/metrics.hpp"

#include <cmath>
#include <map>
#include <set>
#include <string_view>
#include <unordered_map>

#include "commdiff/errors.hpp"

namespace commdiff {

double LogConvention::apply(double x) const {
    if (shift) return base10 ? std::log10(1.0 + x) : std::log1p(x);
    if (x <= 0.0) return 0.0;  // unshifted log is undefined at 0; zero counts drop out
    return base10 ? std::log10(x) : std::log(x);
}

double academic_impact(const Article& article, int current_year) {
    if (!article.citations) throw MissingCitationsError(article.id);
    if (article.year > current_year) throw FutureYearError(article.year, current_year);
    const double citations = static_cast<double>(*article.citations);
    if (article.year == current_year) return citations;
    return citations / static_cast<double>(current_year - article.year);
}

double social_sentiment_impact(std::span<const LinkedTweetView> tweets,
                               const LogConvention& log_conv) {
    if (tweets.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& t : tweets) {
        sum += std::abs(t.sentiment_score) *
               log_conv.apply(static_cast<double>(t.retweet_count));
    }
    return sum / static_cast<double>(tweets.size());
}

double social_user_impact(std::span<const LinkedTweetView> tweets,
                          const LogConvention& log_conv) {
    // ordered map: the follower sum is accumulated in a fixed order
    std::map<std::string_view, std::int64_t> followers_by_user;
    for (const auto& t : tweets) {
        auto [it, inserted] = followers_by_user.emplace(*t.user_id, t.user_followers);
        if (!inserted && t.user_followers > it->second) it->second = t.user_followers;
    }
    double total = 0.0;
    for (const auto& [user, followers] : followers_by_user) {
        total += static_cast<double>(followers);
    }
    return log_conv.apply(total);
}

std::vector<ImpactScores> compute_impact_table(const Corpus& corpus,
                                               const std::vector<SentimentScore>& sentiments,
                                               int current_year, const LogConvention& log_conv,
                                               Exec exec) {
    if (sentiments.size() != corpus.tweets.size()) {
        throw LengthMismatchError(sentiments.size(), corpus.tweets.size());
    }
    // validate up front: throwing inside the parallel region would terminate
    for (const Article& a : corpus.articles) {
        if (a.year > current_year) throw FutureYearError(a.year, current_year);
    }

    const long long n = static_cast<long long>(corpus.articles.size());
    std::vector<ImpactScores> table(corpus.articles.size());

    auto compute_one = [&](long long i) {
        const Article& article = corpus.articles[i];
        ImpactScores& row = table[i];
        row.article_id = article.id;
        if (article.citations) row.academic = academic_impact(article, current_year);

        std::vector<LinkedTweetView> linked;
        if (auto it = corpus.mention_index.find(article.id); it != corpus.mention_index.end()) {
            linked.reserve(it->second.size());
            for (const std::string& tweet_id : it->second) {
                const std::size_t pos = corpus.tweet_pos.at(tweet_id);
                const Tweet& tweet = corpus.tweets[pos];
                linked.push_back({sentiments[pos].score, tweet.retweet_count, &tweet.user_id,
                                  tweet.user_followers});
            }
        }
        row.tweet_count = static_cast<std::int64_t>(linked.size());
        std::set<std::string_view> users;
        for (const auto& t : linked) users.insert(*t.user_id);
        row.user_count = static_cast<std::int64_t>(users.size());
        row.social_sentiment = social_sentiment_impact(linked, log_conv);
        row.social_user = social_user_impact(linked, log_conv);
    };

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 32)
        for (long long i = 0; i < n; ++i) compute_one(i);
    } else {
        for (long long i = 0; i < n; ++i) compute_one(i);
    }
    return table;
}

std::vector<ConcernScores> concern_scores(std::span<const int> article_topics, int k,
                                          const Corpus& corpus) {
    if (article_topics.size() != corpus.articles.size()) {
        throw LengthMismatchError(article_topics.size(), corpus.articles.size());
    }
    if (corpus.articles.empty()) throw NoArticlesError();

    const double n_articles = static_cast<double>(corpus.articles.size());
    std::vector<ConcernScores> out(k);
    std::vector<std::set<std::string_view>> topic_tweets(k), topic_users(k);
    std::vector<std::int64_t> mentioned(k, 0);

    for (std::size_t i = 0; i < corpus.articles.size(); ++i) {
        const int topic = article_topics[i];
        if (topic < 0 || topic >= k) throw TopicIndexOutOfRangeError(topic, k);
        ++out[topic].n_articles_topic;

        auto it = corpus.mention_index.find(corpus.articles[i].id);
        if (it == corpus.mention_index.end()) continue;
        ++mentioned[topic];
        for (const std::string& tweet_id : it->second) {
            topic_tweets[topic].insert(tweet_id);
            topic_users[topic].insert(corpus.tweet(tweet_id).user_id);
        }
    }

    for (int t = 0; t < k; ++t) {
        ConcernScores& c = out[t];
        c.topic_index = t;
        c.n_tweets_topic = static_cast<std::int64_t>(topic_tweets[t].size());
        c.n_users_topic = static_cast<std::int64_t>(topic_users[t].size());
        c.aca_con = static_cast<double>(c.n_articles_topic) / n_articles;
        if (c.n_articles_topic > 0) {
            c.social_defined = true;
            const double denom = static_cast<double>(c.n_articles_topic);
            c.soc_articles_con = static_cast<double>(mentioned[t]) / denom;
            c.soc_tweet_con = static_cast<double>(c.n_tweets_topic) / denom;
            c.soc_user_con = static_cast<double>(c.n_users_topic) / denom;
        }
    }
    return out;
}

std::vector<SocialTopicConcern> social_topic_concern(std::span<const int> tweet_topics, int k) {
    if (tweet_topics.empty()) throw NoTweetsError();

    std::vector<SocialTopicConcern> out(k);
    for (int topic : tweet_topics) {
        if (topic < 0 || topic >= k) throw TopicIndexOutOfRangeError(topic, k);
        ++out[topic].n_tweets_topic;
    }
    const double total = static_cast<double>(tweet_topics.size());
    for (int t = 0; t < k; ++t) {
        out[t].topic_index = t;
        out[t].social_con = static_cast<double>(out[t].n_tweets_topic) / total;
    }
    return out;
}

}  // namespace commdiff
