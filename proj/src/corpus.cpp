#include "commdiff/corpus.hpp"

#include <fstream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "commdiff/errors.hpp"

namespace commdiff {

using nlohmann::json;

namespace {

json parse_line(const std::string& line, std::size_t lineno) {
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) {
        throw MalformedRecordError(lineno, "not a JSON object");
    }
    return rec;
}

std::string require_string(const json& rec, const char* key, std::size_t lineno) {
    auto it = rec.find(key);
    if (it == rec.end() || it->is_null()) throw MissingRequiredFieldError(key, lineno);
    if (!it->is_string()) throw MalformedRecordError(lineno, std::string(key) + " must be a string");
    return it->get<std::string>();
}

std::int64_t require_int(const json& rec, const char* key, std::size_t lineno) {
    auto it = rec.find(key);
    if (it == rec.end() || it->is_null()) throw MissingRequiredFieldError(key, lineno);
    if (!it->is_number_integer()) {
        throw MalformedRecordError(lineno, std::string(key) + " must be an integer");
    }
    return it->get<std::int64_t>();
}

}  // namespace

ArticleSet load_articles(const std::string& path, const ArticleSchema& schema) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open articles file: " + path);

    ArticleSet articles;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json rec = parse_line(line, lineno);

        Article a;
        a.id = require_string(rec, "id", lineno);
        a.title = require_string(rec, "title", lineno);
        std::int64_t year = require_int(rec, "year", lineno);
        if (year > schema.current_year) {
            throw MalformedRecordError(lineno, "year " + std::to_string(year) +
                                                   " after current year " +
                                                   std::to_string(schema.current_year));
        }
        a.year = static_cast<int>(year);

        // modeling text: title plus abstract when present
        a.body = a.title;
        if (auto it = rec.find("body"); it != rec.end() && !it->is_null()) {
            if (!it->is_string()) throw MalformedRecordError(lineno, "body must be a string");
            const std::string abstract = it->get<std::string>();
            if (!abstract.empty()) a.body += " " + abstract;
        }
        if (auto it = rec.find("citations"); it != rec.end() && !it->is_null()) {
            if (!it->is_number_integer()) {
                throw MalformedRecordError(lineno, "citations must be an integer");
            }
            std::int64_t c = it->get<std::int64_t>();
            if (c < 0) throw MalformedRecordError(lineno, "citations must be >= 0");
            a.citations = c;
        }
        if (auto it = rec.find("altmetric_score"); it != rec.end() && !it->is_null()) {
            if (!it->is_number()) {
                throw MalformedRecordError(lineno, "altmetric_score must be a number");
            }
            double s = it->get<double>();
            if (s < 0) throw MalformedRecordError(lineno, "altmetric_score must be >= 0");
            a.altmetric_score = s;
        }

        if (!seen.insert(a.id).second) throw DuplicateIdError(a.id);
        articles.push_back(std::move(a));
    }
    return articles;
}

TweetSet load_tweets(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open tweets file: " + path);

    TweetSet tweets;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json rec = parse_line(line, lineno);

        Tweet t;
        t.id = require_string(rec, "id", lineno);
        t.text = require_string(rec, "text", lineno);
        t.user_id = require_string(rec, "user_id", lineno);
        t.retweet_count = require_int(rec, "retweet_count", lineno);
        if (t.retweet_count < 0) throw MalformedRecordError(lineno, "retweet_count must be >= 0");
        t.user_followers = require_int(rec, "user_followers", lineno);
        if (t.user_followers < 0) throw MalformedRecordError(lineno, "user_followers must be >= 0");

        auto it = rec.find("article_ids");
        if (it == rec.end() || it->is_null()) throw MissingRequiredFieldError("article_ids", lineno);
        if (!it->is_array()) throw MalformedRecordError(lineno, "article_ids must be a list");
        for (const auto& v : *it) {
            if (!v.is_string()) throw MalformedRecordError(lineno, "article_ids entries must be strings");
            t.article_ids.push_back(v.get<std::string>());
        }

        if (!seen.insert(t.id).second) throw DuplicateIdError(t.id);
        tweets.push_back(std::move(t));
    }
    return tweets;
}

std::pair<Corpus, CoverageReport> link_and_stats(ArticleSet articles, TweetSet tweets) {
    Corpus corpus;
    corpus.articles = std::move(articles);
    corpus.tweets = std::move(tweets);

    for (std::size_t i = 0; i < corpus.articles.size(); ++i) {
        corpus.article_pos.emplace(corpus.articles[i].id, i);
    }
    for (std::size_t i = 0; i < corpus.tweets.size(); ++i) {
        corpus.tweet_pos.emplace(corpus.tweets[i].id, i);
    }

    std::set<std::string> users;
    for (const Tweet& t : corpus.tweets) {
        users.insert(t.user_id);
        std::unordered_set<std::string> seen_refs;
        for (const std::string& aid : t.article_ids) {
            if (!seen_refs.insert(aid).second) continue;
            if (corpus.article_pos.count(aid)) {
                corpus.mention_index[aid].push_back(t.id);
            } else {
                corpus.unresolved_refs.emplace_back(t.id, aid);
            }
        }
    }

    CoverageReport report;
    report.n_articles = corpus.articles.size();
    report.n_tweets = corpus.tweets.size();
    for (const Article& a : corpus.articles) {
        if (a.citations) ++report.n_articles_with_citations;
    }
    report.n_articles_mentioned = corpus.mention_index.size();
    report.pct_mentioned =
        report.n_articles == 0
            ? 0.0
            : 100.0 * static_cast<double>(report.n_articles_mentioned) /
                  static_cast<double>(report.n_articles);
    report.n_unique_users = users.size();

    return {std::move(corpus), report};
}

}  // namespace commdiff
