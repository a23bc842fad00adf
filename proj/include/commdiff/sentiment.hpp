#ifndef COMMDIFF_SENTIMENT_HPP
#define COMMDIFF_SENTIMENT_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "commdiff/exec.hpp"

namespace commdiff {

// Polarity lexicon: term -> (positive weight, negative weight), both in [0, 1].
struct Lexicon {
    struct Weights {
        double pos = 0.0;
        double neg = 0.0;
    };
    std::unordered_map<std::string, Weights> terms;
};

// UTF-8 TSV, columns term / pos_weight / neg_weight, no header.
Lexicon load_lexicon(const std::string& path);

enum class Label : int { positive = 0, negative = 1, neutral = 2 };

const char* label_name(Label label);
Label parse_label(std::string_view name);  // throws UnknownLabelError

struct SentimentScore {
    std::string tweet_id;
    std::int64_t pos_count = 0;
    std::int64_t neg_count = 0;
    double score = 0.0;  // (pos - neg) / (pos + neg), 0 when no sentiment terms
    Label label = Label::neutral;
};

// A token counts as positive when pos_weight > neg_weight, negative when the
// reverse holds, and is ignored when equal or absent. Every occurrence counts.
// Label: positive if score > 0, negative if score < 0, else neutral.
SentimentScore score_and_classify(std::span<const std::string> tokens, const Lexicon& lexicon);

// Batch kernel over pre-tokenized tweets; serial and parallel agree bitwise.
std::vector<SentimentScore> score_tweets(const std::vector<std::vector<std::string>>& token_docs,
                                         const std::vector<std::string>& tweet_ids,
                                         const Lexicon& lexicon, Exec exec = Exec::parallel);

struct EvalReport {
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;  // 2PR/(P+R) from the macro-averaged P and R
    // confusion[gold][predicted], label order positive/negative/neutral
    std::array<std::array<std::int64_t, 3>, 3> confusion{};
};

// Unweighted macro average over the three classes; classes without gold or
// predicted examples contribute 0 to the averages.
EvalReport evaluate_macro(std::span<const Label> predicted, std::span<const Label> gold);

}  // namespace commdiff

#endif
