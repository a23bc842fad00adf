#include "commdiff/lda.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "commdiff/errors.hpp"
#include "commdiff/rng.hpp"

namespace commdiff {

namespace {

std::vector<std::vector<int>> expand_tokens(const BowCorpus& docs) {
    std::vector<std::vector<int>> out(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& [w, c] : docs[d]) {
            for (int i = 0; i < c; ++i) out[d].push_back(w);
        }
    }
    return out;
}

double resolve_alpha(double alpha, int k) { return alpha > 0.0 ? alpha : 50.0 / k; }

int sample_from_cumulative(const std::vector<double>& cum, double u) {
    // u is in [0, total); linear scan is fine for the k ranges used here
    const int k = static_cast<int>(cum.size());
    for (int z = 0; z < k - 1; ++z) {
        if (u < cum[z]) return z;
    }
    return k - 1;
}

}  // namespace

TopicModel train_lda(const BowCorpus& docs, std::vector<std::string> vocab, int k,
                     const LdaConfig& config) {
    if (k < 1) throw InvalidHyperparameterError("k must be >= 1");
    if (config.beta <= 0.0) throw InvalidHyperparameterError("beta must be > 0");
    if (config.iterations < 1) throw InvalidHyperparameterError("iterations must be >= 1");
    if (docs.empty()) throw EmptyCorpusError();

    const int V = static_cast<int>(vocab.size());
    const int D = static_cast<int>(docs.size());
    const double alpha = resolve_alpha(config.alpha, k);
    const double beta = config.beta;
    const double v_beta = V * beta;

    auto tokens = expand_tokens(docs);
    std::size_t total_tokens = 0;
    for (const auto& t : tokens) total_tokens += t.size();
    if (total_tokens == 0) throw EmptyCorpusError();

    std::vector<int> n_dk(static_cast<std::size_t>(D) * k, 0);
    std::vector<int> n_kw(static_cast<std::size_t>(k) * V, 0);
    std::vector<int> n_k(k, 0);
    std::vector<std::vector<int>> z(D);

    Rng rng(config.seed);
    for (int d = 0; d < D; ++d) {
        z[d].resize(tokens[d].size());
        for (std::size_t j = 0; j < tokens[d].size(); ++j) {
            const int w = tokens[d][j];
            const int topic = static_cast<int>(rng.bounded(k));
            z[d][j] = topic;
            ++n_dk[static_cast<std::size_t>(d) * k + topic];
            ++n_kw[static_cast<std::size_t>(topic) * V + w];
            ++n_k[topic];
        }
    }

    std::vector<double> cum(k);
    for (int iter = 0; iter < config.iterations; ++iter) {
        for (int d = 0; d < D; ++d) {
            int* dk = n_dk.data() + static_cast<std::size_t>(d) * k;
            for (std::size_t j = 0; j < tokens[d].size(); ++j) {
                const int w = tokens[d][j];
                const int old_topic = z[d][j];
                --dk[old_topic];
                --n_kw[static_cast<std::size_t>(old_topic) * V + w];
                --n_k[old_topic];

                double total = 0.0;
                for (int t = 0; t < k; ++t) {
                    total += (n_kw[static_cast<std::size_t>(t) * V + w] + beta) /
                             (n_k[t] + v_beta) * (dk[t] + alpha);
                    cum[t] = total;
                }
                const int new_topic = sample_from_cumulative(cum, rng.u01() * total);

                z[d][j] = new_topic;
                ++dk[new_topic];
                ++n_kw[static_cast<std::size_t>(new_topic) * V + w];
                ++n_k[new_topic];
            }
        }
    }

    TopicModel model;
    model.k = k;
    model.alpha = alpha;
    model.beta = beta;
    model.iterations = config.iterations;
    model.seed = config.seed;
    model.vocab = std::move(vocab);
    model.topic_word.resize(static_cast<std::size_t>(k) * V);
    model.doc_topic.resize(static_cast<std::size_t>(D) * k);
    for (int t = 0; t < k; ++t) {
        const double denom = n_k[t] + v_beta;
        for (int w = 0; w < V; ++w) {
            model.topic_word[static_cast<std::size_t>(t) * V + w] =
                (n_kw[static_cast<std::size_t>(t) * V + w] + beta) / denom;
        }
    }
    for (int d = 0; d < D; ++d) {
        const double denom = static_cast<double>(tokens[d].size()) + k * alpha;
        for (int t = 0; t < k; ++t) {
            model.doc_topic[static_cast<std::size_t>(d) * k + t] =
                (n_dk[static_cast<std::size_t>(d) * k + t] + alpha) / denom;
        }
    }
    return model;
}

namespace {

// Document-completion likelihood for one held-out document: theta is
// inferred by Gibbs sweeps (phi frozen) on the even-position tokens and the
// odd-position tokens are scored under it. Fitting and scoring on disjoint
// halves keeps extra topics from buying likelihood by per-document
// overfitting. Self-seeded, independent of every other document.
double heldout_doc_loglik(const TopicModel& model, const BowVector& doc, int infer_sweeps,
                          std::uint64_t doc_index, std::size_t* tokens_out) {
    const int k = model.k;
    const double alpha = model.alpha;

    std::vector<int> estimate, evaluate;
    {
        std::size_t position = 0;
        for (const auto& [w, c] : doc) {
            for (int i = 0; i < c; ++i, ++position) {
                (position % 2 == 0 ? estimate : evaluate).push_back(w);
            }
        }
    }
    *tokens_out = evaluate.size();
    if (evaluate.empty()) return 0.0;

    Rng rng(mix_seed(model.seed, doc_index));
    std::vector<int> z(estimate.size());
    std::vector<int> n_k(k, 0);
    for (std::size_t j = 0; j < estimate.size(); ++j) {
        z[j] = static_cast<int>(rng.bounded(k));
        ++n_k[z[j]];
    }

    // first half burn-in, second half averaged for the theta estimate
    const int burnin = infer_sweeps / 2;
    std::vector<double> acc(k, 0.0);
    int samples = 0;
    std::vector<double> cum(k);
    for (int sweep = 0; sweep < infer_sweeps; ++sweep) {
        for (std::size_t j = 0; j < estimate.size(); ++j) {
            const int w = estimate[j];
            --n_k[z[j]];
            double total = 0.0;
            for (int t = 0; t < k; ++t) {
                total += model.phi(t, w) * (n_k[t] + alpha);
                cum[t] = total;
            }
            z[j] = sample_from_cumulative(cum, rng.u01() * total);
            ++n_k[z[j]];
        }
        if (sweep >= burnin) {
            for (int t = 0; t < k; ++t) acc[t] += n_k[t];
            ++samples;
        }
    }
    if (samples == 0) {
        for (int t = 0; t < k; ++t) acc[t] = n_k[t];
        samples = 1;
    }

    const double denom = static_cast<double>(estimate.size()) + k * alpha;
    std::vector<double> theta(k);
    for (int t = 0; t < k; ++t) theta[t] = (acc[t] / samples + alpha) / denom;

    double loglik = 0.0;
    for (int w : evaluate) {
        double p = 0.0;
        for (int t = 0; t < k; ++t) p += theta[t] * model.phi(t, w);
        loglik += std::log(p);
    }
    return loglik;
}

}  // namespace

double perplexity(const TopicModel& model, const BowCorpus& heldout, int infer_sweeps, Exec exec) {
    if (heldout.empty()) throw EmptyHeldoutError();

    const long long n = static_cast<long long>(heldout.size());
    std::vector<double> logliks(heldout.size());
    std::vector<std::size_t> counts(heldout.size());

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (long long d = 0; d < n; ++d) {
            logliks[d] = heldout_doc_loglik(model, heldout[d], infer_sweeps,
                                            static_cast<std::uint64_t>(d), &counts[d]);
        }
    } else {
        for (long long d = 0; d < n; ++d) {
            logliks[d] = heldout_doc_loglik(model, heldout[d], infer_sweeps,
                                            static_cast<std::uint64_t>(d), &counts[d]);
        }
    }

    double total_loglik = 0.0;
    std::size_t total_tokens = 0;
    for (std::size_t d = 0; d < heldout.size(); ++d) {
        total_loglik += logliks[d];
        total_tokens += counts[d];
    }
    if (total_tokens == 0) throw EmptyHeldoutError();
    return std::exp(-total_loglik / static_cast<double>(total_tokens));
}

KSelection select_k(const BowCorpus& docs, const std::vector<std::string>& vocab,
                    std::vector<int> k_range, double heldout_fraction, const LdaConfig& config,
                    Exec exec) {
    if (k_range.empty()) throw InvalidHyperparameterError("k_range must be non-empty");
    if (!(heldout_fraction > 0.0 && heldout_fraction < 1.0)) {
        throw InvalidHyperparameterError("heldout_fraction must be in (0, 1)");
    }
    const std::size_t D = docs.size();
    if (D < 2) throw EmptyCorpusError();

    std::sort(k_range.begin(), k_range.end());
    k_range.erase(std::unique(k_range.begin(), k_range.end()), k_range.end());

    // seed-determined split: shuffle, hold out the tail
    std::vector<std::size_t> order(D);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(mix_seed(config.seed, 0x73706C6974ULL));  // split stream, separate from fits
    for (std::size_t i = D - 1; i > 0; --i) {
        std::swap(order[i], order[rng.bounded(i + 1)]);
    }
    std::size_t n_heldout = static_cast<std::size_t>(
        std::llround(heldout_fraction * static_cast<double>(D)));
    n_heldout = std::clamp<std::size_t>(n_heldout, 1, D - 1);

    BowCorpus train, heldout;
    train.reserve(D - n_heldout);
    heldout.reserve(n_heldout);
    for (std::size_t i = 0; i < D - n_heldout; ++i) train.push_back(docs[order[i]]);
    for (std::size_t i = D - n_heldout; i < D; ++i) heldout.push_back(docs[order[i]]);

    KSelection sel;
    sel.curve.resize(k_range.size());
    const long long nk = static_cast<long long>(k_range.size());

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < nk; ++i) {
            TopicModel m = train_lda(train, vocab, k_range[i], config);
            sel.curve[i] = {k_range[i], perplexity(m, heldout, 100, Exec::serial)};
        }
    } else {
        for (long long i = 0; i < nk; ++i) {
            TopicModel m = train_lda(train, vocab, k_range[i], config);
            sel.curve[i] = {k_range[i], perplexity(m, heldout, 100, Exec::serial)};
        }
    }

    sel.k_best = pick_k_from_curve(sel.curve);
    return sel;
}

int pick_k_from_curve(const std::vector<std::pair<int, double>>& curve) {
    if (curve.empty()) throw InvalidHyperparameterError("empty perplexity curve");
    double best = curve[0].second;
    for (const auto& [k, pp] : curve) best = std::min(best, pp);
    for (const auto& [k, pp] : curve) {
        if (pp <= best * 1.005) return k;  // ties within 0.5% relative: smallest k
    }
    return curve.back().first;
}

TopicAssignment assign_topic(std::span<const double> distribution) {
    if (distribution.empty()) throw InvalidDistributionError("empty distribution");
    double sum = 0.0;
    for (double p : distribution) {
        if (p < 0.0) throw InvalidDistributionError("negative entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
        throw InvalidDistributionError("sum " + std::to_string(sum) + " != 1");
    }
    int best = 0;
    for (int i = 1; i < static_cast<int>(distribution.size()); ++i) {
        if (distribution[i] > distribution[best]) best = i;
    }
    return {best, distribution[best]};
}

std::vector<TopicAssignment> assign_topics(const TopicModel& model) {
    std::vector<TopicAssignment> out(model.n_docs());
    for (int d = 0; d < model.n_docs(); ++d) out[d] = assign_topic(model.theta_row(d));
    return out;
}

std::vector<std::string> top_keywords(const TopicModel& model, int topic_index, int n) {
    if (topic_index < 0 || topic_index >= model.k) {
        throw TopicIndexOutOfRangeError(topic_index, model.k);
    }
    if (n < 1) throw InputError("keyword count must be >= 1");

    const int V = model.vocab_size();
    std::vector<int> idx(V);
    std::iota(idx.begin(), idx.end(), 0);
    auto row = model.phi_row(topic_index);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (row[a] != row[b]) return row[a] > row[b];
        return model.vocab[a] < model.vocab[b];
    });

    const int take = std::min(n, V);
    std::vector<std::string> out;
    out.reserve(take);
    for (int i = 0; i < take; ++i) out.push_back(model.vocab[idx[i]]);
    return out;
}

namespace {

void write_double(std::FILE* f, double x) {
    // %.17g round-trips doubles exactly through strtod
    std::fprintf(f, "%.17g", x);
}

}  // namespace

void save_model(const TopicModel& model, const std::string& path,
                const std::string& header_comment) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw InputError("cannot write model file: " + path);
    if (!header_comment.empty()) std::fprintf(f, "# %s\n", header_comment.c_str());
    std::fprintf(f, "commdiff-lda 1\n");
    std::fprintf(f, "k %d\n", model.k);
    std::fprintf(f, "alpha ");
    write_double(f, model.alpha);
    std::fprintf(f, "\nbeta ");
    write_double(f, model.beta);
    std::fprintf(f, "\niterations %d\n", model.iterations);
    std::fprintf(f, "seed %llu\n", static_cast<unsigned long long>(model.seed));
    std::fprintf(f, "vocab %d\n", model.vocab_size());
    for (const auto& t : model.vocab) std::fprintf(f, "%s\n", t.c_str());
    std::fprintf(f, "phi\n");
    for (int t = 0; t < model.k; ++t) {
        for (int w = 0; w < model.vocab_size(); ++w) {
            if (w) std::fputc(' ', f);
            write_double(f, model.phi(t, w));
        }
        std::fputc('\n', f);
    }
    std::fprintf(f, "theta %d\n", model.n_docs());
    for (int d = 0; d < model.n_docs(); ++d) {
        auto row = model.theta_row(d);
        for (int t = 0; t < model.k; ++t) {
            if (t) std::fputc(' ', f);
            write_double(f, row[t]);
        }
        std::fputc('\n', f);
    }
    std::fclose(f);
}

TopicModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open model file: " + path);

    auto fail = [&](const std::string& what) -> void {
        throw InputError("bad model file " + path + ": " + what);
    };

    while (in.peek() == '#') {
        std::string comment;
        std::getline(in, comment);
    }

    std::string tag;
    int version = 0;
    in >> tag >> version;
    if (tag != "commdiff-lda" || version != 1) fail("unknown header");

    TopicModel model;
    std::string key;
    int vocab_size = 0;
    in >> key >> model.k;
    if (key != "k") fail("expected k");
    in >> key >> model.alpha;
    if (key != "alpha") fail("expected alpha");
    in >> key >> model.beta;
    if (key != "beta") fail("expected beta");
    in >> key >> model.iterations;
    if (key != "iterations") fail("expected iterations");
    unsigned long long seed = 0;
    in >> key >> seed;
    if (key != "seed") fail("expected seed");
    model.seed = seed;
    in >> key >> vocab_size;
    if (key != "vocab" || vocab_size < 0) fail("expected vocab");

    model.vocab.resize(vocab_size);
    for (auto& t : model.vocab) {
        if (!(in >> t)) fail("truncated vocabulary");
    }
    in >> key;
    if (key != "phi") fail("expected phi");
    model.topic_word.resize(static_cast<std::size_t>(model.k) * vocab_size);
    for (auto& x : model.topic_word) {
        if (!(in >> x)) fail("truncated phi");
    }
    int n_docs = 0;
    in >> key >> n_docs;
    if (key != "theta" || n_docs < 0) fail("expected theta");
    model.doc_topic.resize(static_cast<std::size_t>(n_docs) * model.k);
    for (auto& x : model.doc_topic) {
        if (!(in >> x)) fail("truncated theta");
    }
    return model;
}

}  // namespace commdiff
