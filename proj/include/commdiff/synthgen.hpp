#ifndef COMMDIFF_SYNTHGEN_HPP
#define COMMDIFF_SYNTHGEN_HPP

#include <cstdint>
#include <string>

namespace commdiff {

// Planted-topic corpus generator. Article bodies draw from K disjoint
// vocabulary blocks; citations and social activity share a latent rank vector
// mixed with independent noise at weight (1 - coupling), so the rank
// correlation between citations and total follower mass tracks `coupling`.
// Tweet sentiment terms come from the emitted lexicon with known gold labels.
struct SynthSpec {
    int planted_topics = 3;
    int docs_per_topic = 200;
    int vocab_block_size = 100;
    int tokens_per_doc = 40;
    int tokens_per_tweet = 8;
    double avg_tweets_per_article = 10.0;
    double mention_fraction = 1.0;  // share of articles that get tweets
    double coupling = 1.0;          // rho in [0, 1]
    int current_year = 2020;
    std::uint64_t seed = 1;
};

struct SynthPaths {
    std::string articles;      // articles.jsonl
    std::string tweets;        // tweets.jsonl
    std::string lexicon;       // lexicon.tsv
    std::string gold_labels;   // gold_labels.tsv
    std::string ground_truth;  // ground_truth.jsonl
};

// Writes the corpus files plus a ground-truth file carrying planted topics,
// gold sentiment labels, and the per-article construction targets. Byte
// deterministic for a fixed spec.
SynthPaths generate_synthetic_corpus(const SynthSpec& spec, const std::string& out_dir);

// Flat key = value spec file, same syntax as the pipeline config.
SynthSpec load_synth_spec(const std::string& path);

}  // namespace commdiff

#endif
