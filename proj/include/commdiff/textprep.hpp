#ifndef COMMDIFF_TEXTPREP_HPP
#define COMMDIFF_TEXTPREP_HPP

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "commdiff/exec.hpp"

namespace commdiff {

struct TokenizerConfig {
    bool lowercase = true;
    std::size_t min_token_len = 2;  // in code points
    std::unordered_set<std::string> stopwords;
    bool strip_urls_and_handles = true;
};

// Splits on non-alphanumeric code point boundaries, keeping hyphens that sit
// between two word characters ("covid-19" stays one token). URLs (http://,
// https://, www.) and @handles are dropped before splitting when configured.
// Case folding is ASCII-only; non-ASCII code points pass through and count
// as word characters unless they fall in common punctuation blocks.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config);

// Plain-text stopword file, one term per line, UTF-8.
std::unordered_set<std::string> load_stopwords(const std::string& path);

struct Vocabulary {
    std::vector<std::string> terms;                  // lexicographic order
    std::unordered_map<std::string, int> index;      // term -> dense id
    std::vector<int> doc_freq;                       // aligned with terms

    int size() const { return static_cast<int>(terms.size()); }
    int id_of(const std::string& term) const {
        auto it = index.find(term);
        return it == index.end() ? -1 : it->second;
    }
};

// Retains terms whose document frequency lies in [min_df, max_df_ratio * D].
// Throws EmptyVocabularyError when nothing survives.
Vocabulary build_vocab(const std::vector<std::vector<std::string>>& docs, int min_df,
                       double max_df_ratio);

// Sparse term counts, indices ascending. Out-of-vocabulary tokens dropped.
using BowVector = std::vector<std::pair<int, int>>;
BowVector vectorize(const std::vector<std::string>& tokens, const Vocabulary& vocab);

// Batch kernels; serial and parallel produce identical output.
std::vector<std::vector<std::string>> tokenize_all(const std::vector<std::string>& texts,
                                                   const TokenizerConfig& config,
                                                   Exec exec = Exec::parallel);
std::vector<BowVector> vectorize_all(const std::vector<std::vector<std::string>>& token_docs,
                                     const Vocabulary& vocab, Exec exec = Exec::parallel);

}  // namespace commdiff

#endif
