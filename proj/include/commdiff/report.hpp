#ifndef COMMDIFF_REPORT_HPP
#define COMMDIFF_REPORT_HPP

#include <cstdint>
#include <string>

namespace commdiff {

// Flat key = value configuration for the pipeline. Every knob the stages use
// lives here; the wall clock never does.
struct PipelineConfig {
    // inputs / outputs
    std::string articles_path;
    std::string tweets_path;
    std::string lexicon_path;
    std::string stopwords_path;
    std::string out_dir;
    std::string gold_labels_path;  // optional; enables sentiment evaluation

    int current_year = 2020;

    // tokenizer
    bool lowercase = true;
    int min_token_len = 2;
    bool strip_urls_and_handles = true;

    // vocabulary
    int min_df = 2;
    double max_df_ratio = 0.95;

    // topic models (applied to both the article and the tweet corpus)
    int k_min = 1;
    int k_max = 10;
    double alpha = 0.0;  // <= 0 selects 50/k
    double beta = 0.01;
    int iterations = 1000;
    std::uint64_t seed = 42;
    double heldout_fraction = 0.1;
    int n_keywords = 6;

    // log convention for the social impact scores
    bool log_shift = true;
    bool log_base10 = false;

    // correlation flags
    bool spearman = false;
    bool permutation = false;
    bool correlate_mentioned_only = false;

    // FNV-1a of the raw config file bytes; stamped into every output header
    std::uint64_t config_hash = 0;
};

// Parses and validates a config file. Unknown keys are errors.
PipelineConfig load_config(const std::string& path);

// 6-significant-digit float formatting used by every report file.
std::string fmt6(double x);

// Stages, rerunnable in order. Later stages read earlier stages' persisted
// artifacts (most importantly the trained topic models) plus the raw inputs.
void stage_ingest(const PipelineConfig& config);
void stage_sentiment(const PipelineConfig& config);
void stage_topics(const PipelineConfig& config);
void stage_impact(const PipelineConfig& config);
void stage_concern(const PipelineConfig& config);
void stage_correlate(const PipelineConfig& config);

// Full run: all stages in order plus run_metadata.txt. Byte-deterministic
// for identical config file bytes and seed.
void run_pipeline(const PipelineConfig& config);

}  // namespace commdiff

#endif
