#ifndef COMMDIFF_ERRORS_HPP
#define COMMDIFF_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace commdiff {

// Two error families mapped to CLI exit codes: InputError -> 1, ComputeError -> 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

class ComputeError : public std::runtime_error {
public:
    explicit ComputeError(const std::string& msg) : std::runtime_error(msg) {}
};

// -- corpus ------------------------------------------------------------

class DuplicateIdError : public InputError {
public:
    explicit DuplicateIdError(const std::string& id)
        : InputError("duplicate id: " + id), id_(id) {}
    const std::string& id() const { return id_; }

private:
    std::string id_;
};

class MalformedRecordError : public InputError {
public:
    MalformedRecordError(std::size_t line, const std::string& what)
        : InputError("malformed record at line " + std::to_string(line) + ": " + what),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class MissingRequiredFieldError : public InputError {
public:
    MissingRequiredFieldError(const std::string& field, std::size_t line)
        : InputError("missing required field '" + field + "' at line " + std::to_string(line)),
          field_(field), line_(line) {}
    const std::string& field() const { return field_; }
    std::size_t line() const { return line_; }

private:
    std::string field_;
    std::size_t line_;
};

// -- textprep ----------------------------------------------------------

class EmptyVocabularyError : public ComputeError {
public:
    EmptyVocabularyError() : ComputeError("no terms survive vocabulary filtering") {}
};

// -- topicmodel --------------------------------------------------------

class EmptyCorpusError : public ComputeError {
public:
    EmptyCorpusError() : ComputeError("cannot train a topic model on an empty corpus") {}
};

class InvalidHyperparameterError : public ComputeError {
public:
    explicit InvalidHyperparameterError(const std::string& what)
        : ComputeError("invalid hyperparameter: " + what) {}
};

class EmptyHeldoutError : public ComputeError {
public:
    EmptyHeldoutError() : ComputeError("held-out set has no measurable tokens") {}
};

class InvalidDistributionError : public ComputeError {
public:
    explicit InvalidDistributionError(const std::string& what)
        : ComputeError("invalid probability distribution: " + what) {}
};

class TopicIndexOutOfRangeError : public ComputeError {
public:
    TopicIndexOutOfRangeError(int index, int k)
        : ComputeError("topic index " + std::to_string(index) + " out of range [0, " +
                       std::to_string(k) + ")") {}
};

// -- sentiment ---------------------------------------------------------

class DuplicateTermError : public InputError {
public:
    explicit DuplicateTermError(const std::string& term)
        : InputError("duplicate lexicon term: " + term) {}
};

class MalformedLineError : public InputError {
public:
    MalformedLineError(std::size_t line, const std::string& what)
        : InputError("malformed line " + std::to_string(line) + ": " + what) {}
};

class WeightOutOfRangeError : public InputError {
public:
    WeightOutOfRangeError(const std::string& term, double w)
        : InputError("lexicon weight " + std::to_string(w) + " for '" + term +
                     "' outside [0, 1]") {}
};

class LengthMismatchError : public ComputeError {
public:
    LengthMismatchError(std::size_t a, std::size_t b)
        : ComputeError("sequence lengths differ: " + std::to_string(a) + " vs " +
                       std::to_string(b)) {}
};

class UnknownLabelError : public InputError {
public:
    explicit UnknownLabelError(const std::string& label)
        : InputError("unknown sentiment label: " + label) {}
};

// -- metrics -----------------------------------------------------------

class MissingCitationsError : public ComputeError {
public:
    explicit MissingCitationsError(const std::string& article_id)
        : ComputeError("article " + article_id + " has no citation count") {}
};

class FutureYearError : public ComputeError {
public:
    FutureYearError(int year, int current_year)
        : ComputeError("publication year " + std::to_string(year) + " is after current year " +
                       std::to_string(current_year)) {}
};

class NoArticlesError : public ComputeError {
public:
    NoArticlesError() : ComputeError("concern scores need at least one assigned article") {}
};

class NoTweetsError : public ComputeError {
public:
    NoTweetsError() : ComputeError("social concern scores need at least one assigned tweet") {}
};

// -- stats -------------------------------------------------------------

class ZeroVarianceError : public ComputeError {
public:
    ZeroVarianceError() : ComputeError("correlation input series has zero variance") {}
};

class TooFewSamplesError : public ComputeError {
public:
    explicit TooFewSamplesError(std::size_t n)
        : ComputeError("correlation needs at least 3 samples, got " + std::to_string(n)) {}
};

// -- synthgen ----------------------------------------------------------

class InvalidSpecError : public InputError {
public:
    explicit InvalidSpecError(const std::string& what)
        : InputError("invalid synthetic corpus spec: " + what) {}
};

}  // namespace commdiff

#endif
