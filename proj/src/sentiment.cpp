#include "commdiff/sentiment.hpp"

#include <charconv>
#include <fstream>

#include "commdiff/errors.hpp"

namespace commdiff {

namespace {

double parse_weight(std::string_view field, const std::string& term, std::size_t lineno) {
    double w = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), w);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw MalformedLineError(lineno, "bad weight '" + std::string(field) + "'");
    }
    if (w < 0.0 || w > 1.0) throw WeightOutOfRangeError(term, w);
    return w;
}

}  // namespace

Lexicon load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open lexicon file: " + path);

    Lexicon lex;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos) {
            throw MalformedLineError(lineno, "expected 3 tab-separated columns");
        }
        std::string term = line.substr(0, tab1);
        if (term.empty()) throw MalformedLineError(lineno, "empty term");

        Lexicon::Weights w;
        w.pos = parse_weight(std::string_view(line).substr(tab1 + 1, tab2 - tab1 - 1), term, lineno);
        w.neg = parse_weight(std::string_view(line).substr(tab2 + 1), term, lineno);
        if (!lex.terms.emplace(std::move(term), w).second) {
            throw DuplicateTermError(line.substr(0, tab1));
        }
    }
    return lex;
}

const char* label_name(Label label) {
    switch (label) {
        case Label::positive: return "positive";
        case Label::negative: return "negative";
        case Label::neutral: return "neutral";
    }
    return "neutral";
}

Label parse_label(std::string_view name) {
    if (name == "positive") return Label::positive;
    if (name == "negative") return Label::negative;
    if (name == "neutral") return Label::neutral;
    throw UnknownLabelError(std::string(name));
}

SentimentScore score_and_classify(std::span<const std::string> tokens, const Lexicon& lexicon) {
    SentimentScore s;
    for (const auto& t : tokens) {
        auto it = lexicon.terms.find(t);
        if (it == lexicon.terms.end()) continue;
        if (it->second.pos > it->second.neg) {
            ++s.pos_count;
        } else if (it->second.neg > it->second.pos) {
            ++s.neg_count;
        }
    }
    const std::int64_t denom = s.pos_count + s.neg_count;
    s.score = denom == 0 ? 0.0
                         : static_cast<double>(s.pos_count - s.neg_count) /
                               static_cast<double>(denom);
    s.label = s.score > 0.0 ? Label::positive : s.score < 0.0 ? Label::negative : Label::neutral;
    return s;
}

std::vector<SentimentScore> score_tweets(const std::vector<std::vector<std::string>>& token_docs,
                                         const std::vector<std::string>& tweet_ids,
                                         const Lexicon& lexicon, Exec exec) {
    if (token_docs.size() != tweet_ids.size()) {
        throw LengthMismatchError(token_docs.size(), tweet_ids.size());
    }
    std::vector<SentimentScore> out(token_docs.size());
    const long long n = static_cast<long long>(token_docs.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < n; ++i) {
            out[i] = score_and_classify(token_docs[i], lexicon);
            out[i].tweet_id = tweet_ids[i];
        }
    } else {
        for (long long i = 0; i < n; ++i) {
            out[i] = score_and_classify(token_docs[i], lexicon);
            out[i].tweet_id = tweet_ids[i];
        }
    }
    return out;
}

EvalReport evaluate_macro(std::span<const Label> predicted, std::span<const Label> gold) {
    if (predicted.size() != gold.size()) {
        throw LengthMismatchError(predicted.size(), gold.size());
    }

    EvalReport report;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        report.confusion[static_cast<int>(gold[i])][static_cast<int>(predicted[i])]++;
    }

    double sum_p = 0.0, sum_r = 0.0;
    for (int c = 0; c < 3; ++c) {
        std::int64_t tp = report.confusion[c][c];
        std::int64_t pred_c = 0, gold_c = 0;
        for (int o = 0; o < 3; ++o) {
            pred_c += report.confusion[o][c];
            gold_c += report.confusion[c][o];
        }
        sum_p += pred_c == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(pred_c);
        sum_r += gold_c == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(gold_c);
    }
    report.macro_precision = sum_p / 3.0;
    report.macro_recall = sum_r / 3.0;
    const double pr = report.macro_precision + report.macro_recall;
    report.macro_f1 = pr == 0.0 ? 0.0 : 2.0 * report.macro_precision * report.macro_recall / pr;
    return report;
}

}  // namespace commdiff
