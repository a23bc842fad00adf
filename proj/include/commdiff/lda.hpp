#ifndef COMMDIFF_LDA_HPP
#define COMMDIFF_LDA_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "commdiff/exec.hpp"
#include "commdiff/textprep.hpp"

namespace commdiff {

using BowCorpus = std::vector<BowVector>;

struct LdaConfig {
    double alpha = 0.0;  // <= 0 selects the 50/k heuristic
    double beta = 0.01;
    int iterations = 1000;
    std::uint64_t seed = 0;
};

// Collapsed-Gibbs-fitted LDA. phi (topic_word) and theta (doc_topic) are
// estimated from the final sample counts with Dirichlet smoothing; every row
// of both matrices sums to 1.
struct TopicModel {
    int k = 0;
    double alpha = 0.0;
    double beta = 0.0;
    int iterations = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> vocab;
    std::vector<double> topic_word;  // k x V, row-major
    std::vector<double> doc_topic;   // D x k, row-major

    int vocab_size() const { return static_cast<int>(vocab.size()); }
    int n_docs() const { return k == 0 ? 0 : static_cast<int>(doc_topic.size()) / k; }
    double phi(int topic, int term) const { return topic_word[topic * vocab.size() + term]; }
    std::span<const double> phi_row(int topic) const {
        return {topic_word.data() + static_cast<std::size_t>(topic) * vocab.size(), vocab.size()};
    }
    std::span<const double> theta_row(int doc) const {
        return {doc_topic.data() + static_cast<std::size_t>(doc) * k, static_cast<std::size_t>(k)};
    }
};

// Training is a single sequential sampling chain: fixed seed, fixed sweep
// order, bit-identical rerun. Parallelism lives one level up, across
// independent (k, seed) fits.
TopicModel train_lda(const BowCorpus& docs, std::vector<std::string> vocab, int k,
                     const LdaConfig& config);

// Held-out perplexity exp(-sum log p(w|d) / tokens) with p(w|d) = sum_z
// theta_dz phi_zw. theta is inferred per document by Gibbs sweeps with the
// trained phi frozen; each document's chain is seeded from (model seed, doc
// index) so serial and parallel runs agree bitwise.
double perplexity(const TopicModel& model, const BowCorpus& heldout, int infer_sweeps = 100,
                  Exec exec = Exec::parallel);

struct KSelection {
    int k_best = 0;
    std::vector<std::pair<int, double>> curve;  // (k, held-out perplexity), k ascending
};

// Smallest k whose perplexity is within 0.5% relative of the curve minimum.
int pick_k_from_curve(const std::vector<std::pair<int, double>>& curve);

// Trains one model per k on a seed-determined split and picks the k with the
// lowest held-out perplexity; values within 0.5% relative of the minimum tie
// toward the smallest k.
KSelection select_k(const BowCorpus& docs, const std::vector<std::string>& vocab,
                    std::vector<int> k_range, double heldout_fraction, const LdaConfig& config,
                    Exec exec = Exec::parallel);

struct TopicAssignment {
    int topic_index = 0;
    double probability = 0.0;
};

// Argmax of a document-topic distribution; ties break toward the lowest index.
TopicAssignment assign_topic(std::span<const double> distribution);
std::vector<TopicAssignment> assign_topics(const TopicModel& model);

// n highest-phi terms of a topic, descending probability, ties lexicographic.
std::vector<std::string> top_keywords(const TopicModel& model, int topic_index, int n);

// Single-file text persistence; full decimal precision, reload reproduces
// assignments exactly. Leading '#' lines are skipped on load; callers may
// pass one as a provenance header.
void save_model(const TopicModel& model, const std::string& path,
                const std::string& header_comment = "");
TopicModel load_model(const std::string& path);

}  // namespace commdiff

#endif
