// Times the serial reference kernels against their OpenMP versions on a
// synthetic corpus and checks that both produce identical results.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "commdiff/corpus.hpp"
#include "commdiff/lda.hpp"
#include "commdiff/metrics.hpp"
#include "commdiff/sentiment.hpp"
#include "commdiff/synthgen.hpp"
#include "commdiff/textprep.hpp"

using namespace commdiff;

namespace {

double seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <typename Fn>
double time_it(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return seconds(start);
}

void report(const char* kernel, double serial, double parallel, bool identical) {
    std::printf("%-24s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   identical %s\n",
                kernel, serial, parallel, serial / parallel, identical ? "yes" : "NO");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel kernels run serially\n");
#endif

    const std::string dir = (std::filesystem::temp_directory_path() / "commdiff_bench").string();
    SynthSpec spec;
    spec.planted_topics = 3;
    spec.docs_per_topic = 200;
    spec.avg_tweets_per_article = 10.0;
    spec.seed = 7;
    const SynthPaths paths = generate_synthetic_corpus(spec, dir);

    ArticleSchema schema;
    schema.current_year = spec.current_year;
    auto [corpus, coverage] =
        link_and_stats(load_articles(paths.articles, schema), load_tweets(paths.tweets));
    const Lexicon lexicon = load_lexicon(paths.lexicon);
    std::printf("corpus: %zu articles, %zu tweets\n\n", coverage.n_articles, coverage.n_tweets);

    TokenizerConfig tok_config;
    std::vector<std::string> texts, ids;
    for (const Tweet& t : corpus.tweets) {
        texts.push_back(t.text);
        ids.push_back(t.id);
    }

    std::vector<std::vector<std::string>> tokens_serial, tokens_parallel;
    double ts = time_it([&] { tokens_serial = tokenize_all(texts, tok_config, Exec::serial); });
    double tp = time_it([&] { tokens_parallel = tokenize_all(texts, tok_config, Exec::parallel); });
    report("tokenize_all", ts, tp, tokens_serial == tokens_parallel);

    std::vector<SentimentScore> senti_serial, senti_parallel;
    ts = time_it([&] { senti_serial = score_tweets(tokens_serial, ids, lexicon, Exec::serial); });
    tp = time_it(
        [&] { senti_parallel = score_tweets(tokens_parallel, ids, lexicon, Exec::parallel); });
    bool same = senti_serial.size() == senti_parallel.size();
    for (std::size_t i = 0; same && i < senti_serial.size(); ++i) {
        same = senti_serial[i].score == senti_parallel[i].score &&
               senti_serial[i].label == senti_parallel[i].label;
    }
    report("score_tweets", ts, tp, same);

    std::vector<ImpactScores> impact_serial, impact_parallel;
    ts = time_it([&] {
        impact_serial = compute_impact_table(corpus, senti_serial, spec.current_year, {},
                                             Exec::serial);
    });
    tp = time_it([&] {
        impact_parallel = compute_impact_table(corpus, senti_serial, spec.current_year, {},
                                               Exec::parallel);
    });
    same = impact_serial.size() == impact_parallel.size();
    for (std::size_t i = 0; same && i < impact_serial.size(); ++i) {
        same = impact_serial[i].social_sentiment == impact_parallel[i].social_sentiment &&
               impact_serial[i].social_user == impact_parallel[i].social_user &&
               impact_serial[i].academic == impact_parallel[i].academic;
    }
    report("compute_impact_table", ts, tp, same);

    // article topic model for the perplexity kernel
    std::vector<std::string> bodies;
    for (const Article& a : corpus.articles) bodies.push_back(a.body);
    auto article_tokens = tokenize_all(bodies, tok_config);
    Vocabulary vocab = build_vocab(article_tokens, 2, 0.95);
    BowCorpus bow = vectorize_all(article_tokens, vocab);

    BowCorpus train(bow.begin(), bow.end() - 100);
    BowCorpus heldout(bow.end() - 100, bow.end());
    LdaConfig lda_config;
    lda_config.iterations = 150;
    lda_config.seed = 11;
    TopicModel model = train_lda(train, vocab.terms, 3, lda_config);

    double pp_serial = 0.0, pp_parallel = 0.0;
    ts = time_it([&] { pp_serial = perplexity(model, heldout, 100, Exec::serial); });
    tp = time_it([&] { pp_parallel = perplexity(model, heldout, 100, Exec::parallel); });
    report("perplexity", ts, tp, pp_serial == pp_parallel);

    std::vector<int> k_range{1, 2, 3, 4};
    KSelection sel_serial, sel_parallel;
    ts = time_it([&] {
        sel_serial = select_k(bow, vocab.terms, k_range, 0.15, lda_config, Exec::serial);
    });
    tp = time_it([&] {
        sel_parallel = select_k(bow, vocab.terms, k_range, 0.15, lda_config, Exec::parallel);
    });
    report("select_k", ts, tp,
           sel_serial.k_best == sel_parallel.k_best && sel_serial.curve == sel_parallel.curve);

    return 0;
}
