#include "commdiff/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "commdiff/corpus.hpp"
#include "commdiff/errors.hpp"
#include "commdiff/lda.hpp"
#include "commdiff/metrics.hpp"
#include "commdiff/sentiment.hpp"
#include "commdiff/stats.hpp"
#include "commdiff/textprep.hpp"

namespace commdiff {

namespace fs = std::filesystem;

namespace {

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw InputError("config key '" + key + "' expects true/false, got '" + value + "'");
}

struct OutPaths {
    fs::path dir;
    explicit OutPaths(const PipelineConfig& c) : dir(c.out_dir) {}

    std::string coverage() const { return (dir / "coverage.csv").string(); }
    std::string links() const { return (dir / "links.csv").string(); }
    std::string unresolved() const { return (dir / "unresolved.csv").string(); }
    std::string sentiment() const { return (dir / "sentiment.csv").string(); }
    std::string sentiment_distribution() const {
        return (dir / "sentiment_distribution.csv").string();
    }
    std::string sentiment_eval() const { return (dir / "sentiment_eval.csv").string(); }
    std::string article_model() const { return (dir / "models" / "articles_lda.model").string(); }
    std::string tweet_model() const { return (dir / "models" / "tweets_lda.model").string(); }
    std::string article_topics() const { return (dir / "article_topics.csv").string(); }
    std::string tweet_topics() const { return (dir / "tweet_topics.csv").string(); }
    std::string article_keywords() const { return (dir / "article_keywords.csv").string(); }
    std::string tweet_keywords() const { return (dir / "tweet_keywords.csv").string(); }
    std::string perplexity_articles() const { return (dir / "perplexity_articles.csv").string(); }
    std::string perplexity_tweets() const { return (dir / "perplexity_tweets.csv").string(); }
    std::string impact() const { return (dir / "impact.csv").string(); }
    std::string impact_histogram() const { return (dir / "impact_histogram.csv").string(); }
    std::string concern() const { return (dir / "concern.csv").string(); }
    std::string social_concern() const { return (dir / "social_concern.csv").string(); }
    std::string correlations() const { return (dir / "correlations.csv").string(); }
    std::string metadata() const { return (dir / "run_metadata.txt").string(); }
};

class CsvWriter {
public:
    CsvWriter(const std::string& path, const PipelineConfig& config, const std::string& header)
        : out_(path, std::ios::binary) {
        if (!out_) throw InputError("cannot write output file: " + path);
        out_ << "# config=" << hash_hex(config.config_hash) << "\n" << header << "\n";
    }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

// Reads a CSV written by CsvWriter: skips the hash comment and the header.
std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("missing intermediate file (run the earlier stage first): " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool header_skipped = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_skipped) {
            header_skipped = true;
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

void log_stage(const std::string& stage, const std::string& message) {
    std::cerr << "[" << stage << "] " << message << "\n";
}

TokenizerConfig tokenizer_from(const PipelineConfig& config) {
    TokenizerConfig t;
    t.lowercase = config.lowercase;
    t.min_token_len = static_cast<std::size_t>(config.min_token_len);
    t.strip_urls_and_handles = config.strip_urls_and_handles;
    t.stopwords = load_stopwords(config.stopwords_path);
    return t;
}

LogConvention log_conv_from(const PipelineConfig& config) {
    return {config.log_shift, config.log_base10};
}

std::pair<Corpus, CoverageReport> load_linked_corpus(const PipelineConfig& config) {
    ArticleSchema schema;
    schema.current_year = config.current_year;
    ArticleSet articles = load_articles(config.articles_path, schema);
    TweetSet tweets = load_tweets(config.tweets_path);
    return link_and_stats(std::move(articles), std::move(tweets));
}

// sentiment.csv carries the exact integer counts; downstream stages rebuild
// the exact score from them instead of the rounded score column.
std::vector<SentimentScore> read_sentiments(const std::string& path, const Corpus& corpus) {
    std::vector<SentimentScore> out(corpus.tweets.size());
    std::vector<bool> seen(corpus.tweets.size(), false);
    for (const auto& row : read_csv(path)) {
        if (row.size() != 5) throw InputError("bad sentiment.csv row in " + path);
        auto it = corpus.tweet_pos.find(row[0]);
        if (it == corpus.tweet_pos.end()) {
            throw InputError("sentiment.csv row for unknown tweet " + row[0]);
        }
        SentimentScore s;
        s.tweet_id = row[0];
        s.pos_count = std::stoll(row[1]);
        s.neg_count = std::stoll(row[2]);
        const std::int64_t denom = s.pos_count + s.neg_count;
        s.score = denom == 0 ? 0.0
                             : static_cast<double>(s.pos_count - s.neg_count) /
                                   static_cast<double>(denom);
        s.label = parse_label(row[4]);
        out[it->second] = std::move(s);
        seen[it->second] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) throw InputError("sentiment.csv misses tweet " + corpus.tweets[i].id);
    }
    return out;
}

// topic csv rows are 1-based report labels; convert back to internal 0-based.
std::vector<int> read_topic_assignments(const std::string& path,
                                        const std::vector<std::string>& expected_ids) {
    std::map<std::string, int> by_id;
    for (const auto& row : read_csv(path)) {
        if (row.size() != 3) throw InputError("bad topic assignment row in " + path);
        by_id[row[0]] = std::stoi(row[1]) - 1;
    }
    std::vector<int> out;
    out.reserve(expected_ids.size());
    for (const auto& id : expected_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw InputError(path + " misses assignment for " + id);
        out.push_back(it->second);
    }
    return out;
}

struct TrainedCorpus {
    BowCorpus bow;
    std::vector<std::string> vocab_terms;
};

TrainedCorpus build_bow(const std::vector<std::string>& texts, const PipelineConfig& config,
                        const TokenizerConfig& tokenizer) {
    auto token_docs = tokenize_all(texts, tokenizer);
    Vocabulary vocab = build_vocab(token_docs, config.min_df, config.max_df_ratio);
    TrainedCorpus tc;
    tc.bow = vectorize_all(token_docs, vocab);
    tc.vocab_terms = vocab.terms;
    return tc;
}

void write_topic_outputs(const PipelineConfig& config, const std::vector<std::string>& doc_ids,
                         const KSelection& selection, const TopicModel& model,
                         const std::string& model_path, const std::string& topics_path,
                         const std::string& keywords_path, const std::string& perplexity_path) {
    fs::create_directories(fs::path(model_path).parent_path());
    save_model(model, model_path, "config=" + hash_hex(config.config_hash));

    CsvWriter curve(perplexity_path, config, "k,perplexity");
    for (const auto& [k, pp] : selection.curve) {
        curve.row({std::to_string(k), fmt6(pp)});
    }

    CsvWriter topics(topics_path, config, "doc_id,topic,probability");
    auto assignments = assign_topics(model);
    for (std::size_t d = 0; d < doc_ids.size(); ++d) {
        topics.row({doc_ids[d], std::to_string(assignments[d].topic_index + 1),
                    fmt6(assignments[d].probability)});
    }

    CsvWriter keywords(keywords_path, config, "topic,rank,term,weight");
    for (int t = 0; t < model.k; ++t) {
        auto terms = top_keywords(model, t, std::min(config.n_keywords, model.vocab_size()));
        for (std::size_t r = 0; r < terms.size(); ++r) {
            const int term_id = static_cast<int>(
                std::find(model.vocab.begin(), model.vocab.end(), terms[r]) -
                model.vocab.begin());
            keywords.row({std::to_string(t + 1), std::to_string(r + 1), terms[r],
                          fmt6(model.phi(t, term_id))});
        }
    }
}

void write_histogram_rows(CsvWriter& w, const std::string& metric,
                          const std::vector<double>& values) {
    constexpr int kBins = 20;
    double max = 0.0;
    for (double v : values) max = std::max(max, v);
    if (values.empty() || max == 0.0) {
        w.row({metric, "0", fmt6(0.0), fmt6(max), std::to_string(values.size())});
        return;
    }
    const double width = max / kBins;
    std::vector<std::size_t> counts(kBins, 0);
    for (double v : values) {
        int b = std::min(static_cast<int>(v / width), kBins - 1);
        ++counts[b];
    }
    for (int b = 0; b < kBins; ++b) {
        w.row({metric, std::to_string(b), fmt6(b * width), fmt6((b + 1) * width),
               std::to_string(counts[b])});
    }
}

}  // namespace

std::string fmt6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string raw = buffer.str();

    PipelineConfig c;
    c.config_hash = fnv1a(raw);

    std::istringstream lines(raw);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t");
            return s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InputError("config line " + std::to_string(lineno) + " is not key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "articles") c.articles_path = value;
        else if (key == "tweets") c.tweets_path = value;
        else if (key == "lexicon") c.lexicon_path = value;
        else if (key == "stopwords") c.stopwords_path = value;
        else if (key == "out_dir") c.out_dir = value;
        else if (key == "gold_labels") c.gold_labels_path = value;
        else if (key == "current_year") c.current_year = std::stoi(value);
        else if (key == "lowercase") c.lowercase = parse_bool(value, key);
        else if (key == "min_token_len") c.min_token_len = std::stoi(value);
        else if (key == "strip_urls_and_handles") c.strip_urls_and_handles = parse_bool(value, key);
        else if (key == "min_df") c.min_df = std::stoi(value);
        else if (key == "max_df_ratio") c.max_df_ratio = std::stod(value);
        else if (key == "k_min") c.k_min = std::stoi(value);
        else if (key == "k_max") c.k_max = std::stoi(value);
        else if (key == "alpha") c.alpha = std::stod(value);
        else if (key == "beta") c.beta = std::stod(value);
        else if (key == "iterations") c.iterations = std::stoi(value);
        else if (key == "seed") c.seed = std::stoull(value);
        else if (key == "heldout_fraction") c.heldout_fraction = std::stod(value);
        else if (key == "n_keywords") c.n_keywords = std::stoi(value);
        else if (key == "log_shift") c.log_shift = parse_bool(value, key);
        else if (key == "log_base10") c.log_base10 = parse_bool(value, key);
        else if (key == "spearman") c.spearman = parse_bool(value, key);
        else if (key == "permutation") c.permutation = parse_bool(value, key);
        else if (key == "correlate_mentioned_only") c.correlate_mentioned_only = parse_bool(value, key);
        else throw InputError("unknown config key '" + key + "' at line " + std::to_string(lineno));
    }

    if (c.articles_path.empty()) throw InputError("config misses 'articles'");
    if (c.tweets_path.empty()) throw InputError("config misses 'tweets'");
    if (c.lexicon_path.empty()) throw InputError("config misses 'lexicon'");
    if (c.stopwords_path.empty()) throw InputError("config misses 'stopwords'");
    if (c.out_dir.empty()) throw InputError("config misses 'out_dir'");
    if (c.k_min < 1 || c.k_max > 50 || c.k_min > c.k_max) {
        throw InputError("k range must satisfy 1 <= k_min <= k_max <= 50");
    }
    for (const std::string& input :
         {c.articles_path, c.tweets_path, c.lexicon_path, c.stopwords_path, c.gold_labels_path}) {
        if (!input.empty() && !fs::exists(input)) {
            throw InputError("config references missing file: " + input);
        }
    }
    return c;
}

void stage_ingest(const PipelineConfig& config) {
    OutPaths paths(config);
    fs::create_directories(paths.dir);

    auto [corpus, coverage] = load_linked_corpus(config);
    log_stage("ingest", "articles=" + std::to_string(coverage.n_articles) +
                            " tweets=" + std::to_string(coverage.n_tweets) +
                            " mentioned=" + std::to_string(coverage.n_articles_mentioned) +
                            " unresolved_refs=" + std::to_string(corpus.unresolved_refs.size()));

    CsvWriter cov(paths.coverage(), config, "metric,value");
    cov.row({"n_articles", std::to_string(coverage.n_articles)});
    cov.row({"n_tweets", std::to_string(coverage.n_tweets)});
    cov.row({"n_articles_with_citations", std::to_string(coverage.n_articles_with_citations)});
    cov.row({"n_articles_mentioned", std::to_string(coverage.n_articles_mentioned)});
    cov.row({"pct_mentioned", fmt6(coverage.pct_mentioned)});
    cov.row({"n_unique_users", std::to_string(coverage.n_unique_users)});

    CsvWriter links(paths.links(), config, "article_id,tweet_id");
    for (const auto& [aid, tweet_ids] : corpus.mention_index) {
        for (const auto& tid : tweet_ids) links.row({aid, tid});
    }

    CsvWriter unresolved(paths.unresolved(), config, "tweet_id,article_id");
    for (const auto& [tid, aid] : corpus.unresolved_refs) unresolved.row({tid, aid});
}

void stage_sentiment(const PipelineConfig& config) {
    OutPaths paths(config);
    fs::create_directories(paths.dir);

    TweetSet tweets = load_tweets(config.tweets_path);
    const TokenizerConfig tokenizer = tokenizer_from(config);
    const Lexicon lexicon = load_lexicon(config.lexicon_path);

    std::vector<std::string> texts, ids;
    texts.reserve(tweets.size());
    ids.reserve(tweets.size());
    for (const Tweet& t : tweets) {
        texts.push_back(t.text);
        ids.push_back(t.id);
    }
    auto token_docs = tokenize_all(texts, tokenizer);
    auto scores = score_tweets(token_docs, ids, lexicon);

    CsvWriter out(paths.sentiment(), config, "tweet_id,pos_count,neg_count,score,label");
    std::array<std::size_t, 3> label_counts{};
    for (const auto& s : scores) {
        out.row({s.tweet_id, std::to_string(s.pos_count), std::to_string(s.neg_count),
                 fmt6(s.score), label_name(s.label)});
        ++label_counts[static_cast<int>(s.label)];
    }

    CsvWriter dist(paths.sentiment_distribution(), config, "label,count");
    dist.row({"positive", std::to_string(label_counts[0])});
    dist.row({"negative", std::to_string(label_counts[1])});
    dist.row({"neutral", std::to_string(label_counts[2])});

    log_stage("sentiment", "scored=" + std::to_string(scores.size()) +
                               " positive=" + std::to_string(label_counts[0]) +
                               " negative=" + std::to_string(label_counts[1]) +
                               " neutral=" + std::to_string(label_counts[2]));

    if (!config.gold_labels_path.empty()) {
        std::ifstream gold_in(config.gold_labels_path);
        if (!gold_in) throw InputError("cannot open gold labels file: " + config.gold_labels_path);
        std::map<std::string, Label> gold_by_id;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(gold_in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const auto tab = line.find('\t');
            if (tab == std::string::npos) throw MalformedLineError(lineno, "expected id<TAB>label");
            gold_by_id[line.substr(0, tab)] = parse_label(line.substr(tab + 1));
        }
        std::vector<Label> predicted, gold;
        for (const auto& s : scores) {
            auto it = gold_by_id.find(s.tweet_id);
            if (it == gold_by_id.end()) continue;
            predicted.push_back(s.label);
            gold.push_back(it->second);
        }
        EvalReport report = evaluate_macro(predicted, gold);
        CsvWriter eval(paths.sentiment_eval(), config, "metric,value");
        eval.row({"n_evaluated", std::to_string(predicted.size())});
        eval.row({"macro_precision", fmt6(report.macro_precision)});
        eval.row({"macro_recall", fmt6(report.macro_recall)});
        eval.row({"macro_f1", fmt6(report.macro_f1)});
        log_stage("sentiment", "evaluated=" + std::to_string(predicted.size()) +
                                   " macro_f1=" + fmt6(report.macro_f1));
    }
}

void stage_topics(const PipelineConfig& config) {
    OutPaths paths(config);
    fs::create_directories(paths.dir);

    auto [corpus, coverage] = load_linked_corpus(config);
    const TokenizerConfig tokenizer = tokenizer_from(config);

    std::vector<int> k_range;
    for (int k = config.k_min; k <= config.k_max; ++k) k_range.push_back(k);
    LdaConfig lda;
    lda.alpha = config.alpha;
    lda.beta = config.beta;
    lda.iterations = config.iterations;
    lda.seed = config.seed;

    auto run_side = [&](const std::vector<std::string>& texts,
                        const std::vector<std::string>& ids, const std::string& model_path,
                        const std::string& topics_path, const std::string& keywords_path,
                        const std::string& perplexity_path, const char* side) {
        TrainedCorpus tc = build_bow(texts, config, tokenizer);
        KSelection selection =
            select_k(tc.bow, tc.vocab_terms, k_range, config.heldout_fraction, lda);
        TopicModel model = train_lda(tc.bow, tc.vocab_terms, selection.k_best, lda);
        write_topic_outputs(config, ids, selection, model, model_path, topics_path,
                            keywords_path, perplexity_path);
        log_stage("topics", std::string(side) + " docs=" + std::to_string(tc.bow.size()) +
                                " vocab=" + std::to_string(tc.vocab_terms.size()) +
                                " k_best=" + std::to_string(selection.k_best));
    };

    std::vector<std::string> article_texts, article_ids;
    for (const Article& a : corpus.articles) {
        article_texts.push_back(a.body);
        article_ids.push_back(a.id);
    }
    run_side(article_texts, article_ids, paths.article_model(), paths.article_topics(),
             paths.article_keywords(), paths.perplexity_articles(), "articles");

    std::vector<std::string> tweet_texts, tweet_ids;
    for (const Tweet& t : corpus.tweets) {
        tweet_texts.push_back(t.text);
        tweet_ids.push_back(t.id);
    }
    run_side(tweet_texts, tweet_ids, paths.tweet_model(), paths.tweet_topics(),
             paths.tweet_keywords(), paths.perplexity_tweets(), "tweets");
}

void stage_impact(const PipelineConfig& config) {
    OutPaths paths(config);
    fs::create_directories(paths.dir);

    auto [corpus, coverage] = load_linked_corpus(config);
    auto sentiments = read_sentiments(paths.sentiment(), corpus);
    auto table = compute_impact_table(corpus, sentiments, config.current_year,
                                      log_conv_from(config));

    CsvWriter out(paths.impact(), config,
                  "article_id,academic_impact,social_sentiment_impact,social_user_impact,"
                  "tweet_count,user_count");
    for (const auto& row : table) {
        out.row({row.article_id, row.academic ? fmt6(*row.academic) : "NA",
                 fmt6(row.social_sentiment), fmt6(row.social_user),
                 std::to_string(row.tweet_count), std::to_string(row.user_count)});
    }

    CsvWriter hist(paths.impact_histogram(), config, "metric,bin,lo,hi,count");
    std::vector<double> academic, senti, user;
    for (const auto& row : table) {
        if (row.academic) academic.push_back(*row.academic);
        senti.push_back(row.social_sentiment);
        user.push_back(row.social_user);
    }
    write_histogram_rows(hist, "academic_impact", academic);
    write_histogram_rows(hist, "social_sentiment_impact", senti);
    write_histogram_rows(hist, "social_user_impact", user);

    log_stage("impact", "articles=" + std::to_string(table.size()) +
                            " with_academic=" + std::to_string(academic.size()));
}

void stage_concern(const PipelineConfig& config) {
    OutPaths paths(config);
    fs::create_directories(paths.dir);

    auto [corpus, coverage] = load_linked_corpus(config);

    std::vector<std::string> article_ids, tweet_ids;
    for (const Article& a : corpus.articles) article_ids.push_back(a.id);
    for (const Tweet& t : corpus.tweets) tweet_ids.push_back(t.id);

    auto article_topics = read_topic_assignments(paths.article_topics(), article_ids);
    auto tweet_topics = read_topic_assignments(paths.tweet_topics(), tweet_ids);
    // k comes from the persisted models so empty topics still show up
    const int k_articles = load_model(paths.article_model()).k;
    const int k_tweets = load_model(paths.tweet_model()).k;

    auto concern = concern_scores(article_topics, k_articles, corpus);
    CsvWriter out(paths.concern(), config,
                  "topic,aca_con,soc_articles_con,soc_tweet_con,soc_user_con,"
                  "n_articles,n_tweets,n_users");
    for (const auto& c : concern) {
        out.row({std::to_string(c.topic_index + 1), fmt6(c.aca_con),
                 c.social_defined ? fmt6(c.soc_articles_con) : "NA",
                 c.social_defined ? fmt6(c.soc_tweet_con) : "NA",
                 c.social_defined ? fmt6(c.soc_user_con) : "NA",
                 std::to_string(c.n_articles_topic), std::to_string(c.n_tweets_topic),
                 std::to_string(c.n_users_topic)});
    }

    auto social = social_topic_concern(tweet_topics, k_tweets);
    CsvWriter social_out(paths.social_concern(), config, "topic,social_con,n_tweets");
    for (const auto& s : social) {
        social_out.row({std::to_string(s.topic_index + 1), fmt6(s.social_con),
                        std::to_string(s.n_tweets_topic)});
    }

    log_stage("concern", "article_topics=" + std::to_string(k_articles) +
                             " tweet_topics=" + std::to_string(k_tweets));
}

void stage_correlate(const PipelineConfig& config) {
    OutPaths paths(config);
    fs::create_directories(paths.dir);

    auto [corpus, coverage] = load_linked_corpus(config);
    // exact impact values: recompute from the persisted sentiment counts
    // rather than the rounded impact.csv columns
    auto sentiments = read_sentiments(paths.sentiment(), corpus);
    auto impact = compute_impact_table(corpus, sentiments, config.current_year,
                                       log_conv_from(config));

    std::vector<std::string> article_ids;
    for (const Article& a : corpus.articles) article_ids.push_back(a.id);
    auto article_topics = read_topic_assignments(paths.article_topics(), article_ids);
    const int k = load_model(paths.article_model()).k;

    std::vector<std::optional<double>> altmetric;
    for (const Article& a : corpus.articles) altmetric.push_back(a.altmetric_score);

    CorrelationOptions options;
    options.spearman = config.spearman;
    options.permutation = config.permutation;
    options.seed = config.seed;

    auto rows = correlation_tables(impact, article_topics, k, altmetric, options,
                                   config.correlate_mentioned_only);

    CsvWriter out(paths.correlations(), config, "group,metric_x,metric_y,r,p,stars,n");
    for (const auto& row : rows) {
        if (row.result) {
            out.row({row.group, row.metric_x, row.metric_y, fmt6(row.result->r),
                     fmt6(row.result->p_value), row.result->significance,
                     std::to_string(row.n)});
        } else {
            out.row({row.group, row.metric_x, row.metric_y, "NA", "NA", "ns",
                     std::to_string(row.n)});
        }
    }
    log_stage("correlate", "rows=" + std::to_string(rows.size()));
}

void run_pipeline(const PipelineConfig& config) {
    stage_ingest(config);
    stage_sentiment(config);
    stage_topics(config);
    stage_impact(config);
    stage_concern(config);
    stage_correlate(config);

    OutPaths paths(config);
    std::ofstream meta(paths.metadata(), std::ios::binary);
    if (!meta) throw InputError("cannot write " + paths.metadata());
    meta << "# config=" << hash_hex(config.config_hash) << "\n";
    meta << "tool commdiff 0.1.0\n";
    meta << "seed " << config.seed << "\n";
    meta << "current_year " << config.current_year << "\n";
    meta << "articles " << config.articles_path << "\n";
    meta << "tweets " << config.tweets_path << "\n";
    log_stage("report", "done, outputs in " + config.out_dir);
}

}  // namespace commdiff
