#include "commdiff/textprep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "commdiff/errors.hpp"

namespace commdiff {

namespace {

struct Utf8Decoder {
    std::string_view text;
    std::size_t pos = 0;

    bool done() const { return pos >= text.size(); }

    // Decodes the code point at `pos` without advancing. Invalid sequences
    // decode as a single replacement separator byte.
    std::pair<std::uint32_t, std::size_t> peek() const {
        const auto* s = reinterpret_cast<const unsigned char*>(text.data()) + pos;
        const std::size_t left = text.size() - pos;
        if (s[0] < 0x80) return {s[0], 1};
        auto cont = [&](std::size_t i) { return i < left && (s[i] & 0xC0) == 0x80; };
        if ((s[0] & 0xE0) == 0xC0 && cont(1)) {
            return {(std::uint32_t(s[0] & 0x1F) << 6) | (s[1] & 0x3F), 2};
        }
        if ((s[0] & 0xF0) == 0xE0 && cont(1) && cont(2)) {
            return {(std::uint32_t(s[0] & 0x0F) << 12) | (std::uint32_t(s[1] & 0x3F) << 6) |
                        (s[2] & 0x3F),
                    3};
        }
        if ((s[0] & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
            return {(std::uint32_t(s[0] & 0x07) << 18) | (std::uint32_t(s[1] & 0x3F) << 12) |
                        (std::uint32_t(s[2] & 0x3F) << 6) | (s[3] & 0x3F),
                    4};
        }
        return {0xFFFD, 1};
    }

    void advance(std::size_t n) { pos += n; }
};

bool is_ascii_alnum(std::uint32_t cp) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
}

bool is_word_cp(std::uint32_t cp) {
    if (cp < 0x80) return is_ascii_alnum(cp);
    if (cp == 0xA0 || (cp >= 0xA1 && cp <= 0xBF)) return false;  // latin-1 punctuation
    if (cp == 0xD7 || cp == 0xF7) return false;
    if (cp == 0xFFFD) return false;
    if (cp >= 0x2000 && cp <= 0x206F) return false;  // general punctuation
    if (cp >= 0x2E00 && cp <= 0x2E7F) return false;
    if (cp >= 0x3000 && cp <= 0x3003) return false;
    if (cp >= 0xFE50 && cp <= 0xFE6F) return false;
    if (cp >= 0xFF01 && cp <= 0xFF0F) return false;  // fullwidth punctuation
    return true;
}

void append_cp(std::string& out, std::uint32_t cp, std::string_view raw, bool lowercase) {
    if (cp < 0x80) {
        char c = static_cast<char>(cp);
        if (lowercase && c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        out.push_back(c);
    } else {
        out.append(raw);
    }
}

bool starts_with_ci(std::string_view text, std::size_t pos, std::string_view prefix) {
    if (text.size() - pos < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        char c = text[pos + i];
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (c != prefix[i]) return false;
    }
    return true;
}

bool at_url_start(std::string_view text, std::size_t pos) {
    return starts_with_ci(text, pos, "http://") || starts_with_ci(text, pos, "https://") ||
           starts_with_ci(text, pos, "www.");
}

bool is_handle_char(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_space_byte(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config) {
    std::vector<std::string> tokens;
    Utf8Decoder dec{text};

    while (!dec.done()) {
        if (config.strip_urls_and_handles) {
            if (at_url_start(text, dec.pos)) {
                while (!dec.done() && !is_space_byte(text[dec.pos])) dec.advance(1);
                continue;
            }
            if (text[dec.pos] == '@' && dec.pos + 1 < text.size() &&
                is_handle_char(text[dec.pos + 1])) {
                dec.advance(1);
                while (!dec.done() && is_handle_char(text[dec.pos])) dec.advance(1);
                continue;
            }
        }

        auto [cp, len] = dec.peek();
        if (!is_word_cp(cp)) {
            dec.advance(len);
            continue;
        }

        std::string token;
        std::size_t cp_count = 0;
        while (!dec.done()) {
            auto [c, l] = dec.peek();
            if (is_word_cp(c)) {
                append_cp(token, c, text.substr(dec.pos, l), config.lowercase);
                ++cp_count;
                dec.advance(l);
                continue;
            }
            if (c == '-' && !token.empty()) {
                // keep the hyphen only when a word character follows
                Utf8Decoder ahead{text, dec.pos + l};
                if (!ahead.done() && is_word_cp(ahead.peek().first)) {
                    token.push_back('-');
                    ++cp_count;
                    dec.advance(l);
                    continue;
                }
            }
            break;
        }

        if (cp_count >= config.min_token_len && !config.stopwords.count(token)) {
            tokens.push_back(std::move(token));
        }
    }
    return tokens;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open stopword file: " + path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) words.insert(line);
    }
    return words;
}

Vocabulary build_vocab(const std::vector<std::vector<std::string>>& docs, int min_df,
                       double max_df_ratio) {
    if (min_df < 1) throw InputError("min_df must be >= 1");
    if (!(max_df_ratio > 0.0 && max_df_ratio <= 1.0)) {
        throw InputError("max_df_ratio must be in (0, 1]");
    }

    std::map<std::string, int> df;  // ordered: gives lexicographic term ids
    for (const auto& doc : docs) {
        std::unordered_set<std::string_view> uniq(doc.begin(), doc.end());
        for (const auto& t : uniq) ++df[std::string(t)];
    }

    const double max_df = max_df_ratio * static_cast<double>(docs.size()) + 1e-9;
    Vocabulary vocab;
    for (const auto& [term, freq] : df) {
        if (freq >= min_df && static_cast<double>(freq) <= max_df) {
            vocab.index.emplace(term, static_cast<int>(vocab.terms.size()));
            vocab.terms.push_back(term);
            vocab.doc_freq.push_back(freq);
        }
    }
    if (vocab.terms.empty()) throw EmptyVocabularyError();
    return vocab;
}

BowVector vectorize(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
    std::map<int, int> counts;
    for (const auto& t : tokens) {
        int id = vocab.id_of(t);
        if (id >= 0) ++counts[id];
    }
    return BowVector(counts.begin(), counts.end());
}

std::vector<std::vector<std::string>> tokenize_all(const std::vector<std::string>& texts,
                                                   const TokenizerConfig& config, Exec exec) {
    std::vector<std::vector<std::string>> out(texts.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
        for (long long i = 0; i < static_cast<long long>(texts.size()); ++i) {
            out[i] = tokenize(texts[i], config);
        }
    } else {
        for (std::size_t i = 0; i < texts.size(); ++i) out[i] = tokenize(texts[i], config);
    }
    return out;
}

std::vector<BowVector> vectorize_all(const std::vector<std::vector<std::string>>& token_docs,
                                     const Vocabulary& vocab, Exec exec) {
    std::vector<BowVector> out(token_docs.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
        for (long long i = 0; i < static_cast<long long>(token_docs.size()); ++i) {
            out[i] = vectorize(token_docs[i], vocab);
        }
    } else {
        for (std::size_t i = 0; i < token_docs.size(); ++i) out[i] = vectorize(token_docs[i], vocab);
    }
    return out;
}

}  // namespace commdiff
