#include "commdiff/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <vector>

#include <json.hpp>

#include "commdiff/errors.hpp"
#include "commdiff/rng.hpp"

namespace commdiff {

using nlohmann::json;

namespace {

constexpr int kPosTerms = 8;
constexpr int kNegTerms = 8;
constexpr int kAmbTerms = 4;

std::string block_term(int block, int w) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "t%02dw%03d", block, w);
    return buf;
}

std::string article_id(int i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "a%05d", i);
    return buf;
}

std::string tweet_id(int i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "tw%06d", i);
    return buf;
}

int sample_poisson(Rng& rng, double lambda) {
    // Knuth's product method; lambdas here are small
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= rng.u01();
    } while (p > limit);
    return k - 1;
}

std::vector<int> rank_of(const std::vector<double>& scores) {
    const std::size_t n = scores.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] < scores[b];
        return a < b;
    });
    std::vector<int> rank(n);
    for (std::size_t r = 0; r < n; ++r) rank[idx[r]] = static_cast<int>(r);
    return rank;
}

struct PendingTweet {
    std::string id;
    std::string text;
    std::int64_t retweets = 0;
    std::string user;
    std::int64_t followers = 0;
    std::vector<std::string> article_ids;
    const char* gold = "neutral";
    int pos = 0;
    int neg = 0;
    int topic = 0;
};

}  // namespace

SynthPaths generate_synthetic_corpus(const SynthSpec& spec, const std::string& out_dir) {
    if (spec.planted_topics < 1) throw InvalidSpecError("planted_topics must be >= 1");
    if (spec.docs_per_topic < 1) throw InvalidSpecError("docs_per_topic must be >= 1");
    if (spec.vocab_block_size < 1) throw InvalidSpecError("vocab_block_size must be >= 1");
    if (spec.tokens_per_doc < 1 || spec.tokens_per_tweet < 1) {
        throw InvalidSpecError("token counts must be >= 1");
    }
    if (spec.avg_tweets_per_article < 1.0) {
        throw InvalidSpecError("avg_tweets_per_article must be >= 1");
    }
    if (spec.mention_fraction < 0.0 || spec.mention_fraction > 1.0) {
        throw InvalidSpecError("mention_fraction must be in [0, 1]");
    }
    if (spec.coupling < 0.0 || spec.coupling > 1.0) {
        throw InvalidSpecError("coupling must be in [0, 1]");
    }

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    SynthPaths paths;
    paths.articles = (fs::path(out_dir) / "articles.jsonl").string();
    paths.tweets = (fs::path(out_dir) / "tweets.jsonl").string();
    paths.lexicon = (fs::path(out_dir) / "lexicon.tsv").string();
    paths.gold_labels = (fs::path(out_dir) / "gold_labels.tsv").string();
    paths.ground_truth = (fs::path(out_dir) / "ground_truth.jsonl").string();

    const int K = spec.planted_topics;
    const int N = K * spec.docs_per_topic;
    Rng rng(spec.seed);

    // shared latent rank + independent noise gives the coupling knob
    std::vector<double> latent(N), noise(N);
    for (int i = 0; i < N; ++i) latent[i] = rng.u01();
    for (int i = 0; i < N; ++i) noise[i] = rng.u01();
    std::vector<double> social_score(N);
    for (int i = 0; i < N; ++i) {
        social_score[i] = spec.coupling * latent[i] + (1.0 - spec.coupling) * noise[i];
    }
    const std::vector<int> rank_c = rank_of(latent);
    const std::vector<int> rank_s = rank_of(social_score);

    const int first_mentioned_rank =
        static_cast<int>(std::floor((1.0 - spec.mention_fraction) * N));

    // -- lexicon -------------------------------------------------------
    {
        std::ofstream lex(paths.lexicon, std::ios::binary);
        if (!lex) throw InputError("cannot write " + paths.lexicon);
        for (int q = 0; q < kPosTerms; ++q) {
            lex << "goodw" << q << "\t0.8\t0.1\n";
        }
        for (int q = 0; q < kNegTerms; ++q) {
            lex << "badw" << q << "\t0.1\t0.75\n";
        }
        for (int q = 0; q < kAmbTerms; ++q) {
            lex << "ambw" << q << "\t0.4\t0.4\n";  // equal weights: never counted
        }
    }

    // -- articles ------------------------------------------------------
    struct ArticleInfo {
        int topic = 0;
        int year = 0;
        bool has_citations = false;
        std::int64_t citations = 0;
        bool has_altmetric = false;
        double altmetric = 0.0;
        bool mentioned = false;
        std::int64_t follower_total = 0;  // construction target
    };
    std::vector<ArticleInfo> info(N);

    const double ln_lo = std::log(50.0);
    const double ln_hi = std::log(50000.0);

    std::ofstream articles(paths.articles, std::ios::binary);
    if (!articles) throw InputError("cannot write " + paths.articles);
    for (int i = 0; i < N; ++i) {
        ArticleInfo& a = info[i];
        a.topic = i / spec.docs_per_topic;
        const int delta = i % 4;
        a.year = spec.current_year - delta;
        if (i % 17 != 13) {
            a.has_citations = true;
            a.citations = static_cast<std::int64_t>(rank_c[i] + 1) * std::max(delta, 1);
        }
        if (i % 17 != 14) {
            a.has_altmetric = true;
            a.altmetric = 1.5 * (rank_s[i] + 1);
        }
        a.mentioned = rank_s[i] >= first_mentioned_rank;
        if (a.mentioned) {
            const double g = N > 1 ? static_cast<double>(rank_s[i]) / (N - 1) : 0.0;
            a.follower_total =
                static_cast<std::int64_t>(std::floor(std::exp(ln_lo + (ln_hi - ln_lo) * g))) +
                rank_s[i];
        }

        std::string body;
        for (int t = 0; t < spec.tokens_per_doc; ++t) {
            if (t) body += ' ';
            body += block_term(a.topic, static_cast<int>(rng.bounded(spec.vocab_block_size)));
        }

        json rec;
        rec["id"] = article_id(i);
        rec["title"] = "study " + article_id(i);
        rec["body"] = body;
        rec["year"] = a.year;
        if (a.has_citations) rec["citations"] = a.citations;
        if (a.has_altmetric) rec["altmetric_score"] = a.altmetric;
        articles << rec.dump() << "\n";
    }

    // -- tweets --------------------------------------------------------
    // gold label schedule: 7 positive / 6 negative / 7 neutral per 20 tweets
    const auto gold_of = [](int counter) -> int {
        const int m = counter % 20;
        if (m < 7) return 0;   // positive
        if (m < 13) return 1;  // negative
        return 2;              // neutral
    };
    static const int kPosPattern[4][2] = {{1, 0}, {2, 0}, {2, 1}, {3, 1}};
    static const int kNegPattern[4][2] = {{0, 1}, {0, 2}, {1, 2}, {1, 3}};
    static const int kNeuPattern[4][2] = {{0, 0}, {1, 1}, {0, 0}, {2, 2}};

    std::vector<PendingTweet> tweets;
    std::vector<int> shared_used(K, 0);
    int counter = 0;

    for (int i = 0; i < N; ++i) {
        const ArticleInfo& a = info[i];
        if (!a.mentioned) continue;
        const int m = 1 + sample_poisson(rng, spec.avg_tweets_per_article - 1.0);

        const bool dupe_user = m >= 2 && i % 5 == 2;
        const bool shared_user = !dupe_user && m >= 2 && shared_used[a.topic] < 2;
        if (shared_user) ++shared_used[a.topic];

        // unique users for this article and their follower allocation
        const int n_users = dupe_user ? m - 1 : m;
        const int n_budget_users = shared_user ? n_users - 1 : n_users;
        const std::int64_t shared_followers = 10;
        const std::int64_t budget = a.follower_total - (shared_user ? shared_followers : 0);
        std::vector<std::int64_t> user_followers(n_users, 0);
        if (n_budget_users > 0) {
            const std::int64_t q = budget / n_budget_users;
            for (int u = 0; u < n_budget_users; ++u) user_followers[u] = q;
            user_followers[0] += budget - q * n_budget_users;
        }

        for (int j = 0; j < m; ++j) {
            PendingTweet t;
            t.id = tweet_id(static_cast<int>(tweets.size()));
            t.topic = a.topic;
            t.article_ids = {article_id(i)};
            t.retweets = static_cast<std::int64_t>(rng.bounded(16));

            // user slot: with a duplicate user, tweet 1 reuses user 0
            int slot = dupe_user ? (j == 0 ? 0 : j - 1) : j;
            const bool is_shared = shared_user && j == m - 1;
            if (is_shared) {
                t.user = "shared_t" + std::to_string(a.topic);
                t.followers = shared_followers;
            } else {
                t.user = "u" + std::to_string(i) + "_" + std::to_string(slot);
                t.followers = user_followers[slot];
                if (dupe_user && j == 1 && t.followers >= 1) {
                    --t.followers;  // lower repeat observation; max rule restores the target
                }
            }

            const int g = gold_of(counter);
            const int variant = counter % 4;
            int pos = 0, neg = 0;
            if (g == 0) {
                pos = kPosPattern[variant][0];
                neg = kPosPattern[variant][1];
                t.gold = "positive";
            } else if (g == 1) {
                pos = kNegPattern[variant][0];
                neg = kNegPattern[variant][1];
                t.gold = "negative";
            } else {
                pos = kNeuPattern[variant][0];
                neg = kNeuPattern[variant][1];
                t.gold = "neutral";
            }
            t.pos = pos;
            t.neg = neg;

            std::string text;
            for (int w = 0; w < spec.tokens_per_tweet; ++w) {
                if (w) text += ' ';
                text += block_term(a.topic, static_cast<int>(rng.bounded(spec.vocab_block_size)));
            }
            for (int q = 0; q < pos; ++q) {
                text += " goodw" + std::to_string((counter + q) % kPosTerms);
            }
            for (int q = 0; q < neg; ++q) {
                text += " badw" + std::to_string((counter + q) % kNegTerms);
            }
            if (counter % 9 == 4) {
                text += " ambw" + std::to_string(counter % kAmbTerms);
            }
            t.text = std::move(text);
            ++counter;
            tweets.push_back(std::move(t));
        }
    }

    // cross-mention tweets: zero-follower users, two articles of one topic
    for (int topic = 0; topic < K; ++topic) {
        std::vector<int> targets;
        for (int i = topic * spec.docs_per_topic;
             i < (topic + 1) * spec.docs_per_topic && static_cast<int>(targets.size()) < 2; ++i) {
            if (info[i].mentioned) targets.push_back(i);
        }
        if (targets.size() < 2) continue;
        PendingTweet t;
        t.id = tweet_id(static_cast<int>(tweets.size()));
        t.topic = topic;
        t.article_ids = {article_id(targets[0]), article_id(targets[1])};
        t.retweets = 0;
        t.user = "cross_t" + std::to_string(topic);
        t.followers = 0;
        t.gold = "neutral";
        std::string text;
        for (int w = 0; w < spec.tokens_per_tweet; ++w) {
            if (w) text += ' ';
            text += block_term(topic, static_cast<int>(rng.bounded(spec.vocab_block_size)));
        }
        t.text = std::move(text);
        tweets.push_back(std::move(t));
    }

    {
        std::ofstream out(paths.tweets, std::ios::binary);
        if (!out) throw InputError("cannot write " + paths.tweets);
        std::ofstream gold(paths.gold_labels, std::ios::binary);
        if (!gold) throw InputError("cannot write " + paths.gold_labels);
        for (const PendingTweet& t : tweets) {
            json rec;
            rec["id"] = t.id;
            rec["text"] = t.text;
            rec["retweet_count"] = t.retweets;
            rec["user_id"] = t.user;
            rec["user_followers"] = t.followers;
            rec["article_ids"] = t.article_ids;
            out << rec.dump() << "\n";
            gold << t.id << "\t" << t.gold << "\n";
        }
    }

    // -- ground truth ----------------------------------------------------
    {
        std::ofstream gt(paths.ground_truth, std::ios::binary);
        if (!gt) throw InputError("cannot write " + paths.ground_truth);
        json meta;
        meta["type"] = "meta";
        meta["k"] = K;
        meta["coupling"] = spec.coupling;
        meta["seed"] = spec.seed;
        meta["n_articles"] = N;
        meta["n_tweets"] = tweets.size();
        meta["current_year"] = spec.current_year;
        meta["vocab_block_size"] = spec.vocab_block_size;
        gt << meta.dump() << "\n";
        for (int i = 0; i < N; ++i) {
            const ArticleInfo& a = info[i];
            json rec;
            rec["type"] = "article";
            rec["id"] = article_id(i);
            rec["topic"] = a.topic;
            rec["citation_rank"] = rank_c[i];
            rec["social_rank"] = rank_s[i];
            rec["mentioned"] = a.mentioned;
            if (a.mentioned) rec["follower_total"] = a.follower_total;
            gt << rec.dump() << "\n";
        }
        for (const PendingTweet& t : tweets) {
            json rec;
            rec["type"] = "tweet";
            rec["id"] = t.id;
            rec["gold"] = t.gold;
            rec["pos"] = t.pos;
            rec["neg"] = t.neg;
            rec["topic"] = t.topic;
            gt << rec.dump() << "\n";
        }
    }

    return paths;
}

SynthSpec load_synth_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open spec file: " + path);

    SynthSpec spec;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
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
            throw InputError("spec line " + std::to_string(lineno) + " is not key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "planted_topics") spec.planted_topics = std::stoi(value);
        else if (key == "docs_per_topic") spec.docs_per_topic = std::stoi(value);
        else if (key == "vocab_block_size") spec.vocab_block_size = std::stoi(value);
        else if (key == "tokens_per_doc") spec.tokens_per_doc = std::stoi(value);
        else if (key == "tokens_per_tweet") spec.tokens_per_tweet = std::stoi(value);
        else if (key == "avg_tweets_per_article") spec.avg_tweets_per_article = std::stod(value);
        else if (key == "mention_fraction") spec.mention_fraction = std::stod(value);
        else if (key == "coupling") spec.coupling = std::stod(value);
        else if (key == "current_year") spec.current_year = std::stoi(value);
        else if (key == "seed") spec.seed = std::stoull(value);
        else throw InputError("unknown spec key '" + key + "' at line " + std::to_string(lineno));
    }
    return spec;
}

}  // namespace commdiff
