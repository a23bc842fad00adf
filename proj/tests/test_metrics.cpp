#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "commdiff/corpus.hpp"
#include "commdiff/errors.hpp"
#include "commdiff/metrics.hpp"
#include "helpers.hpp"

using namespace commdiff;

namespace {

Article make_article(const std::string& id, int year, std::optional<std::int64_t> citations) {
    Article a;
    a.id = id;
    a.title = "t";
    a.body = "t";
    a.year = year;
    a.citations = citations;
    return a;
}

Tweet make_tweet(const std::string& id, const std::string& user, std::int64_t followers,
                 std::int64_t retweets, std::vector<std::string> refs) {
    Tweet t;
    t.id = id;
    t.text = "x";
    t.user_id = user;
    t.user_followers = followers;
    t.retweet_count = retweets;
    t.article_ids = std::move(refs);
    return t;
}

LinkedTweetView view(double score, std::int64_t retweets, const std::string& user,
                     std::int64_t followers) {
    return {score, retweets, &user, followers};
}

}  // namespace

TEST_CASE("academic_impact divides citations by age") {
    CHECK(academic_impact(make_article("A", 2018, 10), 2020) == doctest::Approx(5.0));
    CHECK(academic_impact(make_article("A", 2020, 7), 2020) == doctest::Approx(7.0));
    CHECK(academic_impact(make_article("A", 2015, 0), 2020) == 0.0);
    CHECK_THROWS_AS(academic_impact(make_article("A", 2018, std::nullopt), 2020),
                    MissingCitationsError);
    CHECK_THROWS_AS(academic_impact(make_article("A", 2021, 5), 2020), FutureYearError);
}

TEST_CASE("social_sentiment_impact averages |score| * log1p(retweets)") {
    const std::string u1 = "U1", u2 = "U2";
    SUBCASE("single tweet") {
        std::vector<LinkedTweetView> tweets = {view(-0.5, 6, u1, 0)};
        // 0.5 * ln 7
        CHECK(social_sentiment_impact(tweets) ==
              doctest::Approx(0.9729550745276566).epsilon(1e-12));
    }
    SUBCASE("zero retweets contribute nothing") {
        std::vector<LinkedTweetView> tweets = {view(1.0, 0, u1, 0)};
        CHECK(social_sentiment_impact(tweets) == 0.0);
    }
    SUBCASE("no linked tweets") {
        CHECK(social_sentiment_impact({}) == 0.0);
    }
    SUBCASE("mean over tweets") {
        std::vector<LinkedTweetView> tweets = {view(1.0, 1, u1, 0), view(0.0, 50, u2, 0)};
        CHECK(social_sentiment_impact(tweets) ==
              doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("social_user_impact sums unique users at max observed followers") {
    const std::string u1 = "U1", u2 = "U2";
    SUBCASE("single user, ln 10") {
        std::vector<LinkedTweetView> tweets = {view(0.0, 0, u1, 9)};
        CHECK(social_user_impact(tweets) == doctest::Approx(2.302585092994046).epsilon(1e-12));
    }
    SUBCASE("same user twice is counted once") {
        std::vector<LinkedTweetView> once = {view(0.0, 0, u1, 9)};
        std::vector<LinkedTweetView> twice = {view(0.0, 0, u1, 9), view(0.5, 3, u1, 9)};
        CHECK(social_user_impact(twice) == social_user_impact(once));
    }
    SUBCASE("max follower value wins") {
        std::vector<LinkedTweetView> tweets = {view(0.0, 0, u1, 10), view(0.0, 0, u1, 7)};
        CHECK(social_user_impact(tweets) == doctest::Approx(std::log(11.0)).epsilon(1e-12));
    }
    SUBCASE("two users add") {
        std::vector<LinkedTweetView> tweets = {view(0.0, 0, u1, 4), view(0.0, 0, u2, 5)};
        CHECK(social_user_impact(tweets) == doctest::Approx(std::log(10.0)).epsilon(1e-12));
    }
    SUBCASE("no users") {
        CHECK(social_user_impact({}) == 0.0);
    }
}

TEST_CASE("log convention flags") {
    LogConvention natural_shift;  // defaults
    CHECK(natural_shift.apply(0.0) == 0.0);
    CHECK(natural_shift.apply(6.0) == doctest::Approx(std::log(7.0)));

    LogConvention base10{true, true};
    CHECK(base10.apply(9.0) == doctest::Approx(1.0));

    LogConvention unshifted{false, false};
    CHECK(unshifted.apply(0.0) == 0.0);  // zero counts drop out instead of -inf
    CHECK(unshifted.apply(7.0) == doctest::Approx(std::log(7.0)));
}

TEST_CASE("scaling retweets strictly increases sentiment impact") {
    const std::string u = "U";
    std::vector<LinkedTweetView> tweets = {view(0.5, 2, u, 0), view(-1.0, 0, u, 0),
                                           view(0.25, 9, u, 0)};
    const double base = social_sentiment_impact(tweets);
    for (int factor : {2, 3, 10}) {
        std::vector<LinkedTweetView> scaled = tweets;
        for (auto& t : scaled) t.retweet_count *= factor;
        CHECK(social_sentiment_impact(scaled) > base);
    }
}

TEST_CASE("adding a zero-score tweet follows the averaging contract") {
    const std::string u1 = "U1", u2 = "U2", u3 = "U3";
    std::vector<LinkedTweetView> tweets = {view(0.8, 5, u1, 10), view(-0.4, 2, u2, 20)};
    const double before = social_sentiment_impact(tweets);
    const double user_before = social_user_impact(tweets);

    auto with_zero = tweets;
    with_zero.push_back(view(0.0, 100, u1, 10));  // existing user
    const double m = static_cast<double>(tweets.size());
    CHECK(social_sentiment_impact(with_zero) ==
          doctest::Approx(before * m / (m + 1.0)).epsilon(1e-12));
    CHECK(social_user_impact(with_zero) == user_before);

    with_zero.back() = view(0.0, 0, u3, 30);  // new user changes only the user score
    CHECK(social_user_impact(with_zero) > user_before);
}

namespace {

Corpus small_corpus() {
    ArticleSet articles;
    articles.push_back(make_article("A1", 2018, 10));        // mentioned
    articles.push_back(make_article("A2", 2020, 7));         // mentioned
    articles.push_back(make_article("A3", 2019, std::nullopt));  // no citations
    articles.push_back(make_article("A4", 2016, 4));         // unmentioned

    TweetSet tweets;
    tweets.push_back(make_tweet("T1", "U1", 100, 3, {"A1"}));
    tweets.push_back(make_tweet("T2", "U1", 100, 0, {"A1", "A2"}));
    tweets.push_back(make_tweet("T3", "U2", 50, 7, {"A2"}));
    tweets.push_back(make_tweet("T4", "U3", 8, 1, {"A3"}));

    auto [corpus, coverage] = link_and_stats(std::move(articles), std::move(tweets));
    return std::move(corpus);
}

std::vector<SentimentScore> scores_for(const Corpus& corpus,
                                       const std::vector<double>& values) {
    std::vector<SentimentScore> scores(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        scores[i].tweet_id = corpus.tweets[i].id;
        scores[i].score = values[i];
    }
    return scores;
}

}  // namespace

TEST_CASE("compute_impact_table wires linked tweets per article") {
    Corpus corpus = small_corpus();
    auto sentiments = scores_for(corpus, {1.0, -0.5, 0.5, 0.0});

    auto table = compute_impact_table(corpus, sentiments, 2020);
    REQUIRE(table.size() == 4);

    CHECK(table[0].article_id == "A1");
    CHECK(table[0].academic == doctest::Approx(5.0));
    CHECK(table[0].tweet_count == 2);
    CHECK(table[0].user_count == 1);  // U1 twice
    // (1*ln4 + 0.5*ln1)/2
    CHECK(table[0].social_sentiment == doctest::Approx(std::log(4.0) / 2.0).epsilon(1e-12));
    CHECK(table[0].social_user == doctest::Approx(std::log(101.0)).epsilon(1e-12));

    CHECK(table[1].tweet_count == 2);  // T2 and T3
    CHECK(table[1].user_count == 2);
    CHECK(table[1].social_sentiment ==
          doctest::Approx((0.5 * std::log(1.0) + 0.5 * std::log(8.0)) / 2.0).epsilon(1e-12));

    CHECK(!table[2].academic.has_value());  // missing citations stays missing
    CHECK(table[2].tweet_count == 1);

    CHECK(table[3].academic == doctest::Approx(1.0));
    CHECK(table[3].tweet_count == 0);
    CHECK(table[3].social_sentiment == 0.0);
    CHECK(table[3].social_user == 0.0);

    SUBCASE("serial equals parallel bitwise") {
        auto serial = compute_impact_table(corpus, sentiments, 2020, {}, Exec::serial);
        for (std::size_t i = 0; i < table.size(); ++i) {
            CHECK(serial[i].academic == table[i].academic);
            CHECK(serial[i].social_sentiment == table[i].social_sentiment);
            CHECK(serial[i].social_user == table[i].social_user);
        }
    }
    SUBCASE("misaligned sentiments are rejected") {
        sentiments.pop_back();
        CHECK_THROWS_AS(compute_impact_table(corpus, sentiments, 2020), LengthMismatchError);
    }
}

TEST_CASE("concern_scores counts per topic") {
    // 10 articles: topic 0 gets 4 (2 mentioned), topic 1 gets 6
    ArticleSet articles;
    for (int i = 0; i < 10; ++i) {
        articles.push_back(make_article("A" + std::to_string(i), 2019, 1));
    }
    TweetSet tweets;
    // topic 0 mentioned articles: A0 (3 tweets), A1 (1 tweet); users overlap across articles
    tweets.push_back(make_tweet("T1", "U1", 1, 0, {"A0"}));
    tweets.push_back(make_tweet("T2", "U2", 1, 0, {"A0"}));
    tweets.push_back(make_tweet("T3", "U1", 1, 0, {"A0", "A1"}));
    tweets.push_back(make_tweet("T4", "U3", 1, 0, {"A1"}));

    auto [corpus, coverage] = link_and_stats(std::move(articles), std::move(tweets));
    std::vector<int> topics = {0, 0, 0, 0, 1, 1, 1, 1, 1, 1};

    auto concern = concern_scores(topics, 2, corpus);
    REQUIRE(concern.size() == 2);
    CHECK(concern[0].aca_con == doctest::Approx(0.4));
    CHECK(concern[1].aca_con == doctest::Approx(0.6));
    CHECK(concern[0].aca_con + concern[1].aca_con == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(concern[0].n_articles_topic + concern[1].n_articles_topic == 10);

    CHECK(concern[0].social_defined);
    CHECK(concern[0].soc_articles_con == doctest::Approx(0.5));  // 2 of 4 mentioned
    // tweets in topic 0: T1 T2 T3 T4 (T3 counted once) -> 4 / 4 articles
    CHECK(concern[0].soc_tweet_con == doctest::Approx(1.0));
    // users in topic 0: U1 U2 U3 -> 3 / 4
    CHECK(concern[0].soc_user_con == doctest::Approx(0.75));
    CHECK(concern[0].n_users_topic <= concern[0].n_tweets_topic);

    CHECK(concern[1].social_defined);
    CHECK(concern[1].soc_tweet_con == 0.0);
}

TEST_CASE("concern_scores matches the worked example") {
    // topic with 4 articles, 8 tweets from 6 unique users
    ArticleSet articles;
    for (int i = 0; i < 4; ++i) {
        articles.push_back(make_article("A" + std::to_string(i), 2019, 1));
    }
    TweetSet tweets;
    for (int i = 0; i < 8; ++i) {
        tweets.push_back(make_tweet("T" + std::to_string(i), "U" + std::to_string(i % 6), 1, 0,
                                    {"A" + std::to_string(i % 4)}));
    }
    auto [corpus, coverage] = link_and_stats(std::move(articles), std::move(tweets));
    auto concern = concern_scores(std::vector<int>{0, 0, 0, 0}, 1, corpus);
    CHECK(concern[0].soc_tweet_con == doctest::Approx(2.0));
    CHECK(concern[0].soc_user_con == doctest::Approx(1.5));
}

TEST_CASE("concern_scores flags topics with no articles") {
    ArticleSet articles;
    articles.push_back(make_article("A0", 2019, 1));
    auto [corpus, coverage] = link_and_stats(std::move(articles), {});
    auto concern = concern_scores(std::vector<int>{0}, 3, corpus);
    REQUIRE(concern.size() == 3);
    CHECK(concern[0].social_defined);
    CHECK(!concern[1].social_defined);
    CHECK(!concern[2].social_defined);
    CHECK(concern[1].aca_con == 0.0);
}

TEST_CASE("concern_scores error paths") {
    auto [empty_corpus, coverage] = link_and_stats({}, {});
    CHECK_THROWS_AS(concern_scores(std::vector<int>{}, 2, empty_corpus), NoArticlesError);

    ArticleSet articles;
    articles.push_back(make_article("A0", 2019, 1));
    auto [corpus, cov2] = link_and_stats(std::move(articles), {});
    CHECK_THROWS_AS(concern_scores(std::vector<int>{5}, 2, corpus), TopicIndexOutOfRangeError);
    CHECK_THROWS_AS(concern_scores(std::vector<int>{0, 0}, 2, corpus), LengthMismatchError);
}

TEST_CASE("social_topic_concern is a partition of tweets") {
    std::vector<int> topics;
    for (int i = 0; i < 100; ++i) topics.push_back(i < 25 ? 0 : 1 + (i % 3));
    auto concern = social_topic_concern(topics, 4);
    REQUIRE(concern.size() == 4);
    CHECK(concern[0].social_con == doctest::Approx(0.25));
    double sum = 0.0;
    std::int64_t count = 0;
    for (const auto& c : concern) {
        sum += c.social_con;
        count += c.n_tweets_topic;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(count == 100);

    SUBCASE("degenerate single topic") {
        auto one = social_topic_concern(std::vector<int>(30, 1), 2);
        CHECK(one[0].social_con == 0.0);
        CHECK(one[1].social_con == 1.0);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(social_topic_concern(std::vector<int>{}, 2), NoTweetsError);
        CHECK_THROWS_AS(social_topic_concern(std::vector<int>{9}, 2),
                        TopicIndexOutOfRangeError);
    }
}
