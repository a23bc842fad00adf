#ifndef COMMDIFF_CORPUS_HPP
#define COMMDIFF_CORPUS_HPP

#include <string>
#include <utility>

#include "commdiff/types.hpp"

namespace commdiff {

// Loader settings for the articles file. Records failing validation raise
// MalformedRecordError / MissingRequiredFieldError / DuplicateIdError.
struct ArticleSchema {
    int current_year = 2020;  // years after this are rejected
};

// Input files are line-delimited JSON, one object per line.
// Articles: id, title, year required; body, citations, altmetric_score optional.
ArticleSet load_articles(const std::string& path, const ArticleSchema& schema);

// Tweets: id, text, retweet_count, user_id, user_followers, article_ids.
// article_ids are kept verbatim, not resolved here.
TweetSet load_tweets(const std::string& path);

// Builds the article -> tweets mention index and the coverage statistics.
// References to unknown article ids go to unresolved_refs and are excluded
// from the index; they never fail the run. Duplicate ids within one tweet's
// article_ids count once.
std::pair<Corpus, CoverageReport> link_and_stats(ArticleSet articles, TweetSet tweets);

}  // namespace commdiff

#endif
